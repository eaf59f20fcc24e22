#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "crs/group_table.hpp"

namespace crs {

struct WordCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A syllable of the amalgamated word group: an element of G1 or G2 at a level.
struct Syllable {
  int side = 0;  // 0 = G1, 1 = G2
  int32_t g = 0;
  auto operator<=>(const Syllable&) const = default;
};

// Normal form: coset representatives alternating between the two sides,
// followed by an element of the amalgamated subgroup H carried at the tail.
struct AmalgamWord {
  int level = 0;
  std::vector<Syllable> sylls;  // alternating, each a non-unit coset representative
  int32_t tail = 0;             // element of H(level)
  bool operator==(const AmalgamWord&) const = default;
};

// The free product G1 *_H G2 at the shared truncation, with the recursive
// restriction formula phi*(x_1..x_n) = (phi^{x_n})*(x_1..x_{n-1}) phi*(x_n).
// Requires levelwise injective amalgamation maps; words are reduced to the
// coset normal form with lowest-index representatives.
class FreeProduct {
 public:
  FreeProduct(const CrossedGroupMap& f1, const CrossedGroupMap& f2, int word_cap);

  const CrossedGroupTable& g(int side) const { return side ? *g2_ : *g1_; }
  const CrossedGroupTable& h() const { return *h_; }
  int word_cap() const { return cap_; }

  AmalgamWord unit(int level) const { return AmalgamWord{level, {}, h_->lvl[level].unit}; }
  AmalgamWord embed(int side, int level, int32_t g) const;
  AmalgamWord reduce(int level, const std::vector<Syllable>& raw) const;
  AmalgamWord mul(const AmalgamWord& u, const AmalgamWord& v) const;
  AmalgamWord inverse(const AmalgamWord& w) const;

  // Restriction of a raw syllable word by the recursion, then normalization.
  AmalgamWord restrict_word(int a, int b, int32_t phi, const std::vector<Syllable>& raw) const;
  AmalgamWord restrict_nf(int b, int32_t phi, const AmalgamWord& w) const;

  // Action of a word on a hom-set element (composite of syllable actions).
  int32_t act_word(int a, int b, const std::vector<Syllable>& raw, int32_t h_tail,
                   int32_t phi) const;

  std::vector<Syllable> raw_of(const AmalgamWord& w) const;

 private:
  int32_t coset_rep(int side, int level, int32_t g) const;  // lowest index in g·f(H)
  int32_t h_part(int side, int level, int32_t g) const;     // g = rep · f(h)
  const CrossedGroupTable *g1_, *g2_, *h_;
  const CrossedGroupMap *f1_, *f2_;
  int cap_;
  // per side, per level: tables for rep and h-part
  std::vector<std::vector<int32_t>> rep_[2], hpart_[2];
};

}  // namespace crs
