#include "crs/free_product.hpp"

#include <cassert>

namespace crs {

FreeProduct::FreeProduct(const CrossedGroupMap& f1, const CrossedGroupMap& f2, int word_cap)
    : g1_(f1.dst), g2_(f2.dst), h_(f1.src), f1_(&f1), f2_(&f2), cap_(word_cap) {
  if (f2.src != f1.src) throw std::invalid_argument("free_product: different amalgams");
  if (g1_->site != g2_->site || g1_->max_level != g2_->max_level)
    throw std::invalid_argument("free_product: site/truncation mismatch");
  const int L = h_->max_level;
  for (int side = 0; side < 2; ++side) {
    const CrossedGroupTable& G = side ? *g2_ : *g1_;
    const CrossedGroupMap& f = side ? f2 : f1;
    rep_[side].resize(L + 1);
    hpart_[side].resize(L + 1);
    for (int a = 0; a <= L; ++a) {
      // injectivity of the amalgamation map
      std::vector<int32_t> finv(G.order(a), -1);
      for (int32_t u = 0; u < h_->order(a); ++u) {
        if (finv[f.f[a][u]] >= 0)
          throw std::invalid_argument("free_product: amalgamation map not injective");
        finv[f.f[a][u]] = u;
      }
      auto& rep = rep_[side][a];
      auto& hp = hpart_[side][a];
      rep.assign(G.order(a), -1);
      hp.assign(G.order(a), -1);
      for (int32_t g = 0; g < G.order(a); ++g) {
        if (rep[g] >= 0) continue;
        // left coset g·f(H): lowest index is the representative
        int32_t lowest = g;
        for (int32_t u = 0; u < h_->order(a); ++u)
          lowest = std::min(lowest, G.lvl[a].mulxy(g, f.f[a][u]));
        for (int32_t u = 0; u < h_->order(a); ++u) {
          const int32_t gu = G.lvl[a].mulxy(g, f.f[a][u]);
          rep[gu] = lowest;
          // gu = lowest · f(h): h = f^{-1}(lowest^{-1}·gu)
          const int32_t fh = G.lvl[a].mulxy(G.lvl[a].invx(lowest), gu);
          assert(finv[fh] >= 0);
          hp[gu] = finv[fh];
        }
      }
    }
  }
}

AmalgamWord FreeProduct::reduce(int level, const std::vector<Syllable>& raw) const {
  const CrossedGroupTable* G[2] = {g1_, g2_};
  const CrossedGroupMap* f[2] = {f1_, f2_};
  AmalgamWord out;
  out.level = level;
  int32_t carry = h_->lvl[level].unit;
  for (const Syllable& s : raw) {
    int side = s.side;
    int32_t g = G[side]->lvl[level].mulxy(f[side]->f[level][carry], s.g);
    carry = h_->lvl[level].unit;
    if (!out.sylls.empty() && out.sylls.back().side == side) {
      g = G[side]->lvl[level].mulxy(out.sylls.back().g, g);
      out.sylls.pop_back();
    }
    const int32_t r = rep_[side][level][g];
    const int32_t hh = hpart_[side][level][g];
    if (rep_[side][level][G[side]->lvl[level].unit] == r) {
      // g lies in the amalgam: everything moves to the carry
      const int32_t runit_h = hpart_[side][level][G[side]->lvl[level].unit];
      // g = rep·f(hh), unit = rep·f(runit_h)  =>  g = f(runit_h^{-1} hh)
      carry = h_->lvl[level].mulxy(h_->lvl[level].invx(runit_h), hh);
    } else {
      out.sylls.push_back({side, r});
      carry = hh;
    }
  }
  out.tail = carry;
  if (static_cast<int>(out.sylls.size()) > cap_)
    throw WordCapExceeded("free product: normal form exceeds word cap");
  return out;
}

std::vector<Syllable> FreeProduct::raw_of(const AmalgamWord& w) const {
  std::vector<Syllable> raw = w.sylls;
  if (w.tail != h_->lvl[w.level].unit) raw.push_back({0, f1_->f[w.level][w.tail]});
  return raw;
}

AmalgamWord FreeProduct::embed(int side, int level, int32_t g) const {
  return reduce(level, {Syllable{side, g}});
}

AmalgamWord FreeProduct::mul(const AmalgamWord& u, const AmalgamWord& v) const {
  assert(u.level == v.level);
  std::vector<Syllable> raw = raw_of(u);
  const auto rv = raw_of(v);
  raw.insert(raw.end(), rv.begin(), rv.end());
  return reduce(u.level, raw);
}

AmalgamWord FreeProduct::inverse(const AmalgamWord& w) const {
  const CrossedGroupTable* G[2] = {g1_, g2_};
  std::vector<Syllable> raw;
  raw.push_back({0, f1_->f[w.level][h_->lvl[w.level].invx(w.tail)]});
  for (auto it = w.sylls.rbegin(); it != w.sylls.rend(); ++it)
    raw.push_back({it->side, G[it->side]->lvl[w.level].invx(it->g)});
  return reduce(w.level, raw);
}

AmalgamWord FreeProduct::restrict_word(int a, int b, int32_t phi,
                                       const std::vector<Syllable>& raw) const {
  const CrossedGroupTable* G[2] = {g1_, g2_};
  // phi*(x_1 .. x_n) = (phi^{x_n})*(x_1 .. x_{n-1}) · phi*(x_n), unrolled
  std::vector<Syllable> out(raw.size());
  int32_t cur = phi;
  for (int i = static_cast<int>(raw.size()) - 1; i >= 0; --i) {
    const Syllable& s = raw[i];
    out[i] = {s.side, G[s.side]->restrict_el(a, b, cur, s.g)};
    cur = G[s.side]->act_on(a, b, s.g, cur);
  }
  return reduce(b, out);
}

AmalgamWord FreeProduct::restrict_nf(int b, int32_t phi, const AmalgamWord& w) const {
  return restrict_word(w.level, b, phi, raw_of(w));
}

int32_t FreeProduct::act_word(int a, int b, const std::vector<Syllable>& raw, int32_t h_tail,
                              int32_t phi) const {
  const CrossedGroupTable* G[2] = {g1_, g2_};
  int32_t cur = phi;
  if (h_tail != h_->lvl[a].unit) cur = g1_->act_on(a, b, f1_->f[a][h_tail], cur);
  for (auto it = raw.rbegin(); it != raw.rend(); ++it)
    cur = G[it->side]->act_on(a, b, it->g, cur);
  return cur;
}

}  // namespace crs
