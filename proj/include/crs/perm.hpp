#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace crs {

// Permutations over carrier positions 0..k-1, stored as image vectors.
using Perm = std::vector<int32_t>;

inline Perm perm_identity(int k) {
  Perm p(k);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline Perm perm_compose(const Perm& p, const Perm& q) {  // p after q
  Perm r(q.size());
  for (size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline Perm perm_invert(const Perm& p) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int32_t>(i);
  return r;
}

inline bool perm_is_identity(const Perm& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int32_t>(i)) return false;
  return true;
}

// Rank in 0..k!-1 by the Lehmer code; used as a perfect-hash key.
inline uint32_t perm_lehmer(const Perm& p) {
  uint32_t rank = 0;
  const int k = static_cast<int>(p.size());
  for (int i = 0; i < k; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < k; ++j)
      if (p[j] < p[i]) ++smaller;
    rank = rank * static_cast<uint32_t>(k - i) + static_cast<uint32_t>(smaller);
  }
  return rank;
}

inline uint32_t factorial(int k) {
  uint32_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<uint32_t>(i);
  return f;
}

}  // namespace crs
