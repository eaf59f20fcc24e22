#include "crs/subgroup.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace crs {

std::vector<int64_t> SubgroupFamily::orders() const {
  std::vector<int64_t> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(static_cast<int64_t>(m.size()));
  return out;
}

bool SubgroupFamily::contains(int level, int32_t x) const {
  const auto& m = members[level];
  return std::binary_search(m.begin(), m.end(), x);
}

SubgroupFamily trivial_family(const CrossedGroupTable& G) {
  SubgroupFamily F;
  F.members.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) F.members[a] = {G.lvl[a].unit};
  return F;
}

SubgroupFamily full_family(const CrossedGroupTable& G) {
  SubgroupFamily F;
  F.members.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) {
    F.members[a].resize(G.order(a));
    for (int32_t x = 0; x < G.order(a); ++x) F.members[a][x] = x;
  }
  return F;
}

namespace {

// Worklist fixpoint: close each level under products/inverses and the whole
// family under restriction maps.  Every ordered pair and every (element,
// morphism) pair is processed once, so a closure costs O(|result|^2) group
// operations plus one restriction sweep per added element.
SubgroupFamily close_family(const CrossedGroupTable& G,
                            std::vector<std::vector<uint8_t>> in) {
  const int L = G.max_level;
  std::vector<std::vector<int32_t>> elems(L + 1);
  std::vector<size_t> group_done(L + 1, 0), rest_done(L + 1, 0);
  for (int a = 0; a <= L; ++a) {
    if (!in[a][G.lvl[a].unit]) in[a][G.lvl[a].unit] = 1;
    for (int32_t x = 0; x < G.order(a); ++x)
      if (in[a][x]) elems[a].push_back(x);
  }
  auto add = [&](int a, int32_t x) {
    if (!in[a][x]) {
      in[a][x] = 1;
      elems[a].push_back(x);
    }
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a <= L; ++a) {
      const LevelGroup& g = G.lvl[a];
      while (group_done[a] < elems[a].size()) {
        const int32_t x = elems[a][group_done[a]++];
        add(a, g.invx(x));
        for (size_t j = 0; j < elems[a].size(); ++j) {
          add(a, g.mulxy(x, elems[a][j]));
          add(a, g.mulxy(elems[a][j], x));
        }
        changed = true;
      }
    }
    for (int a = 0; a <= L; ++a)
      while (rest_done[a] < elems[a].size()) {
        const int32_t x = elems[a][rest_done[a]++];
        for (int b = 0; b <= L; ++b) {
          const int H = homs(G.site, b, a).size();
          for (int32_t p = 0; p < H; ++p) add(b, G.restrict_el(a, b, p, x));
        }
        changed = true;
      }
  }
  SubgroupFamily F;
  F.members.resize(L + 1);
  for (int a = 0; a <= L; ++a) {
    F.members[a] = elems[a];
    std::sort(F.members[a].begin(), F.members[a].end());
  }
  return F;
}

std::vector<std::vector<uint8_t>> empty_bitmap(const CrossedGroupTable& G) {
  std::vector<std::vector<uint8_t>> b(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) b[a].assign(G.order(a), 0);
  return b;
}

}  // namespace

SubgroupFamily generated_subgroup(const CrossedGroupTable& G,
                                  const std::vector<TaggedElement>& seed) {
  auto bm = empty_bitmap(G);
  for (const auto& t : seed) {
    if (t.level < 0 || t.level > G.max_level || t.index < 0 || t.index >= G.order(t.level))
      throw std::invalid_argument("generated_subgroup: element not in G");
    bm[t.level][t.index] = 1;
  }
  return close_family(G, std::move(bm));
}

SubgroupFamily closure_with(const CrossedGroupTable& G, const SubgroupFamily& base,
                            const TaggedElement& extra) {
  auto bm = empty_bitmap(G);
  for (int a = 0; a <= G.max_level; ++a)
    for (int32_t x : base.members[a]) bm[a][x] = 1;
  bm[extra.level][extra.index] = 1;
  return close_family(G, std::move(bm));
}

SubgroupFamily join_families(const CrossedGroupTable& G, const SubgroupFamily& A,
                             const SubgroupFamily& B) {
  auto bm = empty_bitmap(G);
  for (int a = 0; a <= G.max_level; ++a) {
    for (int32_t x : A.members[a]) bm[a][x] = 1;
    for (int32_t x : B.members[a]) bm[a][x] = 1;
  }
  return close_family(G, std::move(bm));
}

bool family_subset(const SubgroupFamily& A, const SubgroupFamily& B) {
  for (size_t a = 0; a < A.members.size(); ++a)
    for (int32_t x : A.members[a])
      if (!std::binary_search(B.members[a].begin(), B.members[a].end(), x)) return false;
  return true;
}

bool family_closed(const CrossedGroupTable& G, const SubgroupFamily& F, std::string* witness) {
  for (int a = 0; a <= G.max_level; ++a) {
    for (int32_t x : F.members[a])
      for (int32_t y : F.members[a])
        if (!F.contains(a, G.lvl[a].mulxy(x, y))) {
          if (witness) *witness = "product escapes at level " + std::to_string(a);
          return false;
        }
    for (int b = 0; b <= G.max_level; ++b) {
      const HomSet& H = homs(G.site, b, a);
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t x : F.members[a])
          if (!F.contains(b, G.restrict_el(a, b, p, x))) {
            if (witness)
              *witness = "phi = " + H.list[p].str() + " carries element #" + std::to_string(x) +
                         " of level " + std::to_string(a) + " out of the family";
            return false;
          }
    }
  }
  return true;
}

CrossedGroupTable subtable(const CrossedGroupTable& G, const SubgroupFamily& F) {
  CrossedGroupTable S;
  S.site = G.site;
  S.max_level = G.max_level;
  S.init_offsets();
  const int L = G.max_level;
  std::vector<std::vector<int32_t>> idx_in(L + 1);  // ambient index -> sub index
  for (int a = 0; a <= L; ++a) {
    idx_in[a].assign(G.order(a), -1);
    for (size_t i = 0; i < F.members[a].size(); ++i) idx_in[a][F.members[a][i]] = static_cast<int32_t>(i);
  }
  for (int a = 0; a <= L; ++a) {
    const auto& mem = F.members[a];
    LevelGroup& g = S.lvl[a];
    g.order = static_cast<int32_t>(mem.size());
    g.unit = idx_in[a][G.lvl[a].unit];
    assert(g.unit >= 0);
    g.mul.resize(static_cast<size_t>(g.order) * g.order);
    g.inv.resize(g.order);
    for (int32_t i = 0; i < g.order; ++i) {
      g.inv[i] = idx_in[a][G.lvl[a].invx(mem[i])];
      assert(g.inv[i] >= 0);
      for (int32_t j = 0; j < g.order; ++j) {
        const int32_t z = idx_in[a][G.lvl[a].mulxy(mem[i], mem[j])];
        assert(z >= 0 && "family not closed under multiplication");
        g.mul[static_cast<size_t>(i) * g.order + j] = z;
      }
    }
    if (!G.lvl[a].elems.empty()) {
      for (int32_t i = 0; i < g.order; ++i) g.elems.push_back(G.lvl[a].elems[mem[i]]);
      g.build_lookup();
    }
    S.rest[a].resize(static_cast<size_t>(S.hom_total(a)) * g.order);
    S.act[a].resize(static_cast<size_t>(S.hom_total(a)) * g.order);
    for (int b = 0; b <= L; ++b) {
      const int H = homs(G.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t i = 0; i < g.order; ++i) {
          const int32_t r = idx_in[b][G.restrict_el(a, b, p, mem[i])];
          assert(r >= 0 && "family not closed under restriction");
          S.rest[a][(static_cast<size_t>(S.hoff[a][b]) + p) * g.order + i] = r;
        }
      for (int32_t i = 0; i < g.order; ++i)
        for (int32_t p = 0; p < H; ++p)
          S.act[a][static_cast<size_t>(i) * S.hom_total(a) + S.hoff[a][b] + p] =
              G.act_on(a, b, mem[i], p);
    }
  }
  return S;
}

CrossedGroupMap inclusion_map(const CrossedGroupTable& G, const SubgroupFamily& F,
                              const CrossedGroupTable& sub) {
  CrossedGroupMap m;
  m.src = &sub;
  m.dst = &G;
  m.f.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) m.f[a] = F.members[a];
  return m;
}

KernelImage image_kernel_factor(const CrossedGroupMap& f) {
  const CrossedGroupTable& G = *f.src;
  const CrossedGroupTable& K = *f.dst;
  KernelImage out;
  out.kernel.members.resize(G.max_level + 1);
  out.image.members.resize(K.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) {
    std::set<int32_t> img;
    for (int32_t x = 0; x < G.order(a); ++x) {
      if (f.f[a][x] == K.lvl[a].unit) out.kernel.members[a].push_back(x);
      img.insert(f.f[a][x]);
    }
    out.image.members[a].assign(img.begin(), img.end());
  }
  return out;
}

PullbackTable pullback(const CrossedGroupMap& f, const CrossedGroupMap& g) {
  const CrossedGroupTable& G1 = *f.src;
  const CrossedGroupTable& G2 = *g.src;
  const CrossedGroupTable& K = *f.dst;
  if (g.dst != f.dst) throw std::invalid_argument("pullback: codomain mismatch");
  const int L = K.max_level;
  PullbackTable out;
  out.table.site = K.site;
  out.table.max_level = L;
  out.table.init_offsets();
  out.pairs.resize(L + 1);
  std::vector<std::vector<int32_t>> pair_idx(L + 1);
  for (int a = 0; a <= L; ++a) {
    pair_idx[a].assign(static_cast<size_t>(G1.order(a)) * G2.order(a), -1);
    for (int32_t x = 0; x < G1.order(a); ++x)
      for (int32_t y = 0; y < G2.order(a); ++y)
        if (f.f[a][x] == g.f[a][y]) {
          pair_idx[a][static_cast<size_t>(x) * G2.order(a) + y] =
              static_cast<int32_t>(out.pairs[a].size());
          out.pairs[a].push_back({x, y});
        }
    LevelGroup& lg = out.table.lvl[a];
    lg.order = static_cast<int32_t>(out.pairs[a].size());
    lg.unit = pair_idx[a][static_cast<size_t>(G1.lvl[a].unit) * G2.order(a) + G2.lvl[a].unit];
    lg.mul.resize(static_cast<size_t>(lg.order) * lg.order);
    lg.inv.resize(lg.order);
    for (int32_t i = 0; i < lg.order; ++i) {
      const auto [x, y] = out.pairs[a][i];
      lg.inv[i] = pair_idx[a][static_cast<size_t>(G1.lvl[a].invx(x)) * G2.order(a) +
                              G2.lvl[a].invx(y)];
      for (int32_t j = 0; j < lg.order; ++j) {
        const auto [u, v] = out.pairs[a][j];
        lg.mul[static_cast<size_t>(i) * lg.order + j] =
            pair_idx[a][static_cast<size_t>(G1.lvl[a].mulxy(x, u)) * G2.order(a) +
                        G2.lvl[a].mulxy(y, v)];
      }
    }
  }
  for (int a = 0; a <= L; ++a) {
    const int tot = out.table.hom_total(a);
    out.table.rest[a].resize(static_cast<size_t>(tot) * out.table.order(a));
    out.table.act[a].resize(static_cast<size_t>(tot) * out.table.order(a));
    for (int b = 0; b <= L; ++b) {
      const int H = homs(K.site, b, a).size();
      for (int32_t i = 0; i < out.table.order(a); ++i) {
        const auto [x, y] = out.pairs[a][i];
        for (int32_t p = 0; p < H; ++p) {
          const int32_t rx = G1.restrict_el(a, b, p, x);
          const int32_t ry = G2.restrict_el(a, b, p, y);
          const int32_t r = pair_idx[b][static_cast<size_t>(rx) * G2.order(b) + ry];
          assert(r >= 0 && "pullback restriction escapes the fiber product");
          out.table.rest[a][(static_cast<size_t>(out.table.hoff[a][b]) + p) * out.table.order(a) +
                            i] = r;
          // actions inherited through the common codomain
          out.table.act[a][static_cast<size_t>(i) * tot + out.table.hoff[a][b] + p] =
              K.act_on(a, b, f.f[a][x], p);
        }
      }
    }
  }
  out.proj1.src = &out.table;
  out.proj1.dst = &G1;
  out.proj2.src = &out.table;
  out.proj2.dst = &G2;
  out.proj1.f.resize(L + 1);
  out.proj2.f.resize(L + 1);
  for (int a = 0; a <= L; ++a)
    for (const auto& [x, y] : out.pairs[a]) {
      out.proj1.f[a].push_back(x);
      out.proj2.f[a].push_back(y);
    }
  return out;
}

bool is_levelwise_normal(const CrossedGroupTable& G, const SubgroupFamily& N) {
  for (int a = 0; a <= G.max_level; ++a)
    for (int32_t g = 0; g < G.order(a); ++g)
      for (int32_t u : N.members[a]) {
        const int32_t c = G.lvl[a].mulxy(G.lvl[a].mulxy(g, u), G.lvl[a].invx(g));
        if (!N.contains(a, c)) return false;
      }
  return true;
}

QuotientASet quotient_aset(const CrossedGroupTable& G, const SubgroupFamily& N) {
  if (!is_levelwise_normal(G, N)) throw std::invalid_argument("quotient_aset: non-normal N");
  const int L = G.max_level;
  QuotientASet Q;
  Q.G = &G;
  Q.classes.resize(L + 1);
  Q.coset_of.resize(L + 1);
  Q.rep_of.resize(L + 1);
  Q.rest.resize(L + 1);
  Q.mul.resize(L + 1);
  for (int a = 0; a <= L; ++a) {
    Q.coset_of[a].assign(G.order(a), -1);
    for (int32_t x = 0; x < G.order(a); ++x) {
      if (Q.coset_of[a][x] >= 0) continue;
      const int32_t c = static_cast<int32_t>(Q.rep_of[a].size());
      Q.rep_of[a].push_back(x);
      for (int32_t u : N.members[a]) Q.coset_of[a][G.lvl[a].mulxy(x, u)] = c;
    }
    Q.classes[a] = static_cast<int32_t>(Q.rep_of[a].size());
    Q.mul[a].resize(static_cast<size_t>(Q.classes[a]) * Q.classes[a]);
    for (int32_t c = 0; c < Q.classes[a]; ++c)
      for (int32_t d = 0; d < Q.classes[a]; ++d)
        Q.mul[a][static_cast<size_t>(c) * Q.classes[a] + d] =
            Q.coset_of[a][G.lvl[a].mulxy(Q.rep_of[a][c], Q.rep_of[a][d])];
  }
  for (int a = 0; a <= L; ++a) {
    Q.rest[a].resize(static_cast<size_t>(G.hom_total(a)) * Q.classes[a]);
    for (int b = 0; b <= L; ++b) {
      const int H = homs(G.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t c = 0; c < Q.classes[a]; ++c) {
          const int32_t val = Q.coset_of[b][G.restrict_el(a, b, p, Q.rep_of[a][c])];
          // representative independence
          for (int32_t u : N.members[a]) {
            const int32_t x2 = G.lvl[a].mulxy(Q.rep_of[a][c], u);
            if (Q.coset_of[b][G.restrict_el(a, b, p, x2)] != val)
              throw std::logic_error("quotient_aset: restriction depends on representative");
          }
          Q.rest[a][(static_cast<size_t>(G.hoff[a][b]) + p) * Q.classes[a] + c] = val;
        }
    }
  }
  return Q;
}

int32_t QuotientASet::restrict_coset(int a, int b, int32_t phi, int32_t c) const {
  return rest[a][(static_cast<size_t>(G->hoff[a][b]) + phi) * classes[a] + c];
}

}  // namespace crs
