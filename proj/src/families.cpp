#include "crs/families.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "crs/subgroup.hpp"

namespace crs {

std::vector<int32_t> permuted_fiber_sizes(const std::vector<int32_t>& fiber_sizes,
                                          const Perm& sigma) {
  const Perm inv = perm_invert(sigma);
  std::vector<int32_t> t(fiber_sizes.size());
  for (size_t j = 0; j < t.size(); ++j) t[j] = fiber_sizes[inv[j]];
  return t;
}

bool fiber_sizes_valid(Site s, const std::vector<int32_t>& sizes) {
  if (s != Site::Nabla) return true;
  return !sizes.empty() && sizes.front() >= 1 && sizes.back() >= 1;
}

namespace {

std::vector<int32_t> fiber_sizes(const SiteMorphism& phi) {
  std::vector<int32_t> cnt(carrier_size(phi.site, phi.cod), 0);
  for (int32_t p : phi.pos_map()) cnt[p]++;
  return cnt;
}

SiteMorphism morphism_from_fiber_sizes(Site s, int dom, int cod,
                                       const std::vector<int32_t>& sizes) {
  if (!fiber_sizes_valid(s, sizes))
    throw std::invalid_argument("morphism_from_fiber_sizes: empty endpoint fiber");
  SiteMorphism out;
  out.site = s;
  out.dom = dom;
  out.cod = cod;
  std::vector<Pt> full;
  for (size_t j = 0; j < sizes.size(); ++j)
    for (int32_t r = 0; r < sizes[j]; ++r) full.push_back(pos_pt(s, cod, static_cast<int>(j)));
  const int lead = (s == Site::Nabla) ? 1 : 0;
  for (int i = 0; i < interior_size(s, dom); ++i) out.values.push_back(full[lead + i]);
  return out;
}

}  // namespace

SiteMorphism sym_action(const SiteMorphism& phi, const Perm& sigma) {
  return morphism_from_fiber_sizes(phi.site, phi.dom, phi.cod,
                                   permuted_fiber_sizes(fiber_sizes(phi), sigma));
}

Perm weyl_restrict_perm(const SiteMorphism& phi, const Perm& sigma, uint32_t signs) {
  const auto pm = phi.pos_map();
  const int cb = static_cast<int>(pm.size());
  const int ca = carrier_size(phi.site, phi.cod);
  std::vector<int32_t> cnt(ca, 0), start(ca, 0);
  for (int32_t p : pm) cnt[p]++;
  for (int j = 1; j < ca; ++j) start[j] = start[j - 1] + cnt[j - 1];
  // offsets of the permuted blocks
  const Perm inv = perm_invert(sigma);
  std::vector<int32_t> off(ca + 1, 0);
  for (int j = 0; j < ca; ++j) off[j + 1] = off[j] + cnt[inv[j]];
  Perm tau(cb);
  for (int i = 0; i < ca; ++i) {
    const int j = sigma[i];
    const bool rev = (signs >> i) & 1u;
    for (int32_t r = 0; r < cnt[i]; ++r)
      tau[start[i] + r] = off[j] + (rev ? cnt[i] - 1 - r : r);
  }
  return tau;
}

uint32_t pullback_signs(const SiteMorphism& phi, uint32_t signs) {
  uint32_t out = 0;
  const auto pm = phi.pos_map();
  for (size_t d = 0; d < pm.size(); ++d) out |= ((signs >> pm[d]) & 1u) << d;
  return out;
}

bool perm_stabilized(Site s, int n, const Perm& sigma) {
  if (s != Site::Nabla) return true;
  const int last = carrier_size(s, n) - 1;
  return (sigma[0] == 0 || sigma[0] == last) && (sigma[last] == 0 || sigma[last] == last);
}

std::vector<Perm> stabilized_perms(Site s, int n) {
  std::vector<Perm> out;
  Perm p = perm_identity(carrier_size(s, n));
  do {
    if (perm_stabilized(s, n, p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Perm> stabilized_perms_by_definition(Site s, int n, int probe_cap) {
  std::vector<Perm> out;
  Perm p = perm_identity(carrier_size(s, n));
  do {
    bool ok = true;
    for (int b = 0; b <= probe_cap && ok; ++b)
      for (const auto& phi : homs(s, b, n).list) {
        if (!fiber_sizes_valid(s, permuted_fiber_sizes(fiber_sizes(phi), p))) {
          ok = false;
          break;
        }
      }
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int cyc_restrict_shift(const SiteMorphism& mu, int k) {
  if (mu.site != Site::AugDelta) throw std::invalid_argument("cyc_restrict_shift: aug-delta only");
  const int n = mu.cod, m = mu.dom;
  if (m == 0) return 0;
  if (n == 0) return 0;
  int s = 0;
  for (Pt v : mu.values)
    if (v > n - (k % n)) ++s;
  return s % m;
}

Perm rotation_perm(int n, int k) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = (i + k) % n;
  return p;
}

bool is_rotation(const Perm& p, int* shift_out) {
  const int n = static_cast<int>(p.size());
  if (n == 0) {
    if (shift_out) *shift_out = 0;
    return true;
  }
  const int k = p[0];
  for (int i = 0; i < n; ++i)
    if (p[i] != (i + k) % n) return false;
  if (shift_out) *shift_out = k;
  return true;
}

WeylElem hyp_restrict(const SiteMorphism& phi, const WeylElem& x) {
  return WeylElem{weyl_restrict_perm(phi, x.perm, x.signs), pullback_signs(phi, x.signs)};
}

// --- builders ---

namespace {

CrossedGroupTable build_from_payloads(Site s, int L,
                                      std::vector<std::vector<WeylElem>> elems) {
  CrossedGroupTable G;
  G.site = s;
  G.max_level = L;
  G.init_offsets();
  for (int a = 0; a <= L; ++a) {
    LevelGroup& g = G.lvl[a];
    g.elems = std::move(elems[a]);
    g.order = static_cast<int32_t>(g.elems.size());
    g.build_lookup();
    g.unit = g.index_of(perm_identity(carrier_size(s, a)), 0);
    assert(g.unit == 0 && "identity should be first in enumeration order");
    g.inv.resize(g.order);
    for (int32_t x = 0; x < g.order; ++x) {
      WeylElem w = weyl_inv(g.elems[x]);
      g.inv[x] = g.index_of(w.perm, w.signs);
      assert(g.inv[x] >= 0);
    }
    if (g.order <= kDenseMulCap) g.build_dense_from_payload();
  }
  for (int a = 0; a <= L; ++a) {
    const LevelGroup& ga = G.lvl[a];
    G.rest[a].resize(static_cast<size_t>(G.hom_total(a)) * ga.order);
    G.act[a].resize(static_cast<size_t>(G.hom_total(a)) * ga.order);
    for (int b = 0; b <= L; ++b) {
      const HomSet& H = homs(s, b, a);
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t x = 0; x < ga.order; ++x) {
          WeylElem w = hyp_restrict(H.list[p], ga.elems[x]);
          const int32_t r = G.lvl[b].index_of(w.perm, w.signs);
          assert(r >= 0 && "family not closed under restriction");
          G.rest[a][(static_cast<size_t>(G.hoff[a][b]) + p) * ga.order + x] = r;
        }
      for (int32_t x = 0; x < ga.order; ++x)
        for (int32_t p = 0; p < H.size(); ++p) {
          const int32_t q = H.index_of(sym_action(H.list[p], ga.elems[x].perm));
          assert(q >= 0 && "action leaves the hom-set");
          G.act[a][static_cast<size_t>(x) * G.hom_total(a) + G.hoff[a][b] + p] = q;
        }
    }
  }
  return G;
}

bool interior_fixing(Site s, int n, const Perm& p) {
  if (s != Site::Nabla) return true;
  const int last = carrier_size(s, n) - 1;
  return p[0] == 0 && p[last] == last;
}

uint32_t endpoint_mask(Site s, int n) {
  if (s != Site::Nabla) return 0;
  return 1u | (1u << (carrier_size(s, n) - 1));
}

}  // namespace

CrossedGroupTable sym_table(Site s, int L) {
  std::vector<std::vector<WeylElem>> elems(L + 1);
  for (int a = 0; a <= L; ++a) {
    Perm p = perm_identity(carrier_size(s, a));
    do {
      if (interior_fixing(s, a, p)) elems[a].push_back({p, 0});
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return build_from_payloads(s, L, std::move(elems));
}

CrossedGroupTable cyc_table(int L) {
  std::vector<std::vector<WeylElem>> elems(L + 1);
  for (int a = 0; a <= L; ++a)
    for (int k = 0; k < std::max(1, a); ++k) elems[a].push_back({rotation_perm(a, k), 0});
  return build_from_payloads(Site::AugDelta, L, std::move(elems));
}

CrossedGroupTable hyp_table(Site s, int L) {
  if (s == Site::Delta) throw std::invalid_argument("hyp_table: AugDelta or Nabla");
  std::vector<std::vector<WeylElem>> elems(L + 1);
  for (int a = 0; a <= L; ++a) {
    const int c = carrier_size(s, a);
    const uint32_t ep = endpoint_mask(s, a);
    Perm p = perm_identity(c);
    do {
      if (!interior_fixing(s, a, p)) continue;
      for (uint32_t m = 0; m < (1u << c); ++m)
        if ((m & ep) == 0) elems[a].push_back({p, m});
    } while (std::next_permutation(p.begin(), p.end()));
    // reorder: (perm lex, mask ascending) is already the enumeration order
  }
  return build_from_payloads(s, L, std::move(elems));
}

std::vector<WeylElem> weyl_level_elements(Site s, int n, int probe_cap) {
  if (probe_cap < n + 2)
    throw std::invalid_argument("weyl_level_elements: probe_cap must be at least n+2");
  std::vector<WeylElem> out;
  const int c = carrier_size(s, n);
  for (const Perm& sigma : stabilized_perms(s, n)) {
    for (uint32_t m = 0; m < (1u << c); ++m) {
      bool member = true;
      for (int b = 0; b <= probe_cap && member; ++b)
        for (const auto& phi : homs(s, b, n).list) {
          Perm tau = weyl_restrict_perm(phi, sigma, m);
          if (!perm_stabilized(s, b, tau)) {
            member = false;
            break;
          }
        }
      if (member) out.push_back({sigma, m});
    }
  }
  return out;
}

CrossedGroupTable weyl_table(Site s, int L, int probe_cap) {
  std::vector<std::vector<WeylElem>> elems(L + 1);
  for (int a = 0; a <= L; ++a) {
    const int cap = probe_cap < 0 ? a + 2 : probe_cap;
    elems[a] = weyl_level_elements(s, a, cap);
  }
  return build_from_payloads(s, L, std::move(elems));
}

CrossedGroupTable dihedral_table(int L) {
  CrossedGroupTable W = weyl_table(Site::AugDelta, L);
  std::vector<TaggedElement> gens;
  for (int a = 1; a <= L; ++a) {
    const int c = carrier_size(Site::AugDelta, a);
    // rotation by one, all signs +1
    int32_t rot = W.lvl[a].index_of(rotation_perm(c, 1), 0);
    assert(rot >= 0);
    gens.push_back({a, rot});
    // full reversal with all signs -1
    Perm rev(c);
    for (int i = 0; i < c; ++i) rev[i] = c - 1 - i;
    int32_t refl = W.lvl[a].index_of(rev, (1u << c) - 1);
    assert(refl >= 0);
    gens.push_back({a, refl});
  }
  SubgroupFamily F = generated_subgroup(W, gens);
  return subtable(W, F);
}

// --- canonical map ---

CrossedGroupMap canonical_map(const CrossedGroupTable& G, const CrossedGroupTable& W) {
  const Site s = G.site;
  if (W.site != s || W.max_level != G.max_level)
    throw std::invalid_argument("canonical_map: site/truncation mismatch");
  if (G.max_level < sbar_level(s))
    throw std::invalid_argument("canonical_map: truncation below the co-relation object");
  const int slv = s_level(s), sb = sbar_level(s);
  const int32_t i0 = iota_index(s, 0), i1 = iota_index(s, 1);
  CrossedGroupMap m;
  m.src = &G;
  m.dst = &W;
  m.f.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) {
    const int c = carrier_size(s, a);
    m.f[a].resize(G.order(a));
    for (int32_t x = 0; x < G.order(a); ++x) {
      Perm sigma(c);
      uint32_t mask = 0;
      for (int p = 0; p < c; ++p) {
        sigma[p] = s_hom_to_pos(s, a, G.act_on(a, slv, x, pos_to_s_hom(s, a, p)));
        const int32_t r = refl_index(s, a, p);
        const int32_t u = G.restrict_el(a, sb, r, x);
        const int b0 = s_hom_to_pos(s, sb, G.act_on(sb, slv, u, i0));
        const int b1 = s_hom_to_pos(s, sb, G.act_on(sb, slv, u, i1));
        assert(b0 != b1);
        if (b0 > b1) mask |= 1u << p;
      }
      const int32_t w = W.lvl[a].index_of(sigma, mask);
      assert(w >= 0 && "canonical image must land in the Weyl group");
      m.f[a][x] = w;
    }
  }
  return m;
}

// --- terminality via complete backtracking search ---

namespace {

struct MapSearch {
  const CrossedGroupTable* G;
  const CrossedGroupTable* W;
  int L;
  std::vector<std::vector<std::vector<int32_t>>> cand;  // [a][x] -> candidate W indices
  std::vector<std::vector<int32_t>> assign;
  long long found = 0;
  CrossedGroupMap witness;
  long long nodes = 0;

  bool propagate(std::vector<std::pair<int, int32_t>>& trail, size_t from) {
    // closure under products with assigned elements and under restrictions
    for (size_t qi = from; qi < trail.size(); ++qi) {
      auto [a, x] = trail[qi];
      const int32_t fx = assign[a][x];
      for (int32_t y = 0; y < G->order(a); ++y) {
        const int32_t fy = assign[a][y];
        if (fy < 0) continue;
        const int32_t xy = G->lvl[a].mulxy(x, y);
        const int32_t fxy = W->lvl[a].mulxy(fx, fy);
        if (!set_value(a, xy, fxy, trail)) return false;
        const int32_t yx = G->lvl[a].mulxy(y, x);
        const int32_t fyx = W->lvl[a].mulxy(fy, fx);
        if (!set_value(a, yx, fyx, trail)) return false;
      }
      for (int b = 0; b <= L; ++b) {
        const int H = homs(G->site, b, a).size();
        for (int32_t p = 0; p < H; ++p)
          if (!set_value(b, G->restrict_el(a, b, p, x), W->restrict_el(a, b, p, fx), trail))
            return false;
      }
    }
    return true;
  }

  bool set_value(int a, int32_t x, int32_t v, std::vector<std::pair<int, int32_t>>& trail) {
    if (assign[a][x] == v) return true;
    if (assign[a][x] >= 0) return false;
    assign[a][x] = v;
    trail.push_back({a, x});
    return true;
  }

  void undo(std::vector<std::pair<int, int32_t>>& trail, size_t to) {
    while (trail.size() > to) {
      auto [a, x] = trail.back();
      trail.pop_back();
      assign[a][x] = -1;
    }
  }

  void dfs(std::vector<std::pair<int, int32_t>>& trail) {
    ++nodes;
    // pick the first unassigned element
    for (int a = 0; a <= L; ++a)
      for (int32_t x = 0; x < G->order(a); ++x)
        if (assign[a][x] < 0) {
          for (int32_t v : cand[a][x]) {
            const size_t mark = trail.size();
            if (set_value(a, x, v, trail) && propagate(trail, mark)) dfs(trail);
            undo(trail, mark);
          }
          return;
        }
    // complete assignment: confirm it is a crossed-group map
    CrossedGroupMap m;
    m.src = G;
    m.dst = W;
    m.f = assign;
    if (verify_map(m).ok) {
      if (found == 0) witness = m;
      ++found;
    }
  }
};

}  // namespace

TerminalityResult terminality_check(const CrossedGroupTable& G, const CrossedGroupTable& W) {
  const Site s = G.site;
  const int slv = s_level(s);
  MapSearch ms;
  ms.G = &G;
  ms.W = &W;
  ms.L = G.max_level;
  ms.cand.resize(ms.L + 1);
  ms.assign.resize(ms.L + 1);
  for (int a = 0; a <= ms.L; ++a) {
    const int c = carrier_size(s, a);
    ms.cand[a].resize(G.order(a));
    ms.assign[a].assign(G.order(a), -1);
    for (int32_t x = 0; x < G.order(a); ++x) {
      Perm sigma(c);
      for (int p = 0; p < c; ++p)
        sigma[p] = s_hom_to_pos(s, a, G.act_on(a, slv, x, pos_to_s_hom(s, a, p)));
      for (uint32_t m = 0; m < (1u << c); ++m) {
        const int32_t w = W.lvl[a].index_of(sigma, m);
        if (w >= 0) ms.cand[a][x].push_back(w);
      }
    }
  }
  std::vector<std::pair<int, int32_t>> trail;
  // the unit is forced
  for (int a = 0; a <= ms.L; ++a) {
    ms.assign[a][G.lvl[a].unit] = W.lvl[a].unit;
    trail.push_back({a, G.lvl[a].unit});
  }
  if (ms.propagate(trail, 0)) ms.dfs(trail);
  TerminalityResult out;
  out.count = ms.found;
  out.unique = (ms.found == 1);
  out.witness = ms.witness;
  return out;
}

bool check_weyl_isomorphism(const CrossedGroupTable& W, int n, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const Site s = W.site;
  const int64_t hn = static_cast<int64_t>(factorial(n)) << n;
  if (s == Site::AugDelta) {
    if (W.order(n) != hn) return fail("order != 2^n n!");
    // H_n elements are exactly the payloads; check the wreath formula against
    // the table product.
    const LevelGroup& g = W.lvl[n];
    for (int32_t x = 0; x < g.order; ++x)
      for (int32_t y = 0; y < g.order; ++y) {
        const WeylElem& a = g.elems[x];
        const WeylElem& b = g.elems[y];
        WeylElem w;
        w.perm = perm_compose(a.perm, b.perm);
        w.signs = 0;
        for (int i = 0; i < n; ++i)
          w.signs |= (((a.signs >> b.perm[i]) ^ (b.signs >> i)) & 1u) << i;
        if (g.index_of(w.perm, w.signs) != g.mulxy(x, y)) return fail("wreath mismatch");
      }
    return true;
  }
  if (s == Site::Nabla) {
    if (W.order(n) != 2 * hn) return fail("order != 2^{n+1} n!");
    const LevelGroup& g = W.lvl[n];
    const int c = n + 2;
    // explicit bijection H_n x C2 -> W(<<n>>)
    auto embed = [&](const Perm& sig, uint32_t mask, int t) -> int32_t {
      Perm full(c);
      full[0] = t ? c - 1 : 0;
      full[c - 1] = t ? 0 : c - 1;
      for (int i = 0; i < n; ++i) full[i + 1] = sig[i] + 1;
      uint32_t fm = t ? (1u | (1u << (c - 1))) : 0;
      fm |= mask << 1;
      return g.index_of(full, fm);
    };
    std::vector<std::tuple<Perm, uint32_t, int>> hx;
    Perm sig = perm_identity(n);
    do {
      for (uint32_t m = 0; m < (1u << n); ++m) {
        hx.push_back({sig, m, 0});
        hx.push_back({sig, m, 1});
      }
    } while (std::next_permutation(sig.begin(), sig.end()));
    std::vector<int32_t> img(hx.size());
    std::vector<uint8_t> hit(g.order, 0);
    for (size_t i = 0; i < hx.size(); ++i) {
      const auto& [sg, m, t] = hx[i];
      const int32_t w = embed(sg, m, t);
      if (w < 0) return fail("embedding misses the Weyl group");
      if (hit[w]) return fail("embedding not injective");
      hit[w] = 1;
      img[i] = w;
    }
    // multiplication-preserving: (a,t)(b,u) = (ab, tu) with the wreath rule
    for (size_t i = 0; i < hx.size(); ++i)
      for (size_t j = 0; j < hx.size(); ++j) {
        const auto& [sa, ma, ta] = hx[i];
        const auto& [sb, mb, tb] = hx[j];
        Perm sp = perm_compose(sa, sb);
        uint32_t mp = 0;
        for (int k = 0; k < n; ++k) mp |= (((ma >> sb[k]) ^ (mb >> k)) & 1u) << k;
        const int32_t lhs = embed(sp, mp, ta ^ tb);
        if (lhs != g.mulxy(img[i], img[j])) return fail("product mismatch");
      }
    return true;
  }
  return fail("unsupported site");
}

}  // namespace crs
