#include "crs/base_change.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace crs {

const SiteFunctor& functor_j() {
  static const SiteFunctor F = [] {
    SiteFunctor f;
    f.name = "j";
    f.src = Site::Delta;
    f.dst = Site::AugDelta;
    f.obj = [](int k) { return k + 1; };
    f.map_mor = [](const SiteMorphism& phi) {
      SiteMorphism out;
      out.site = Site::AugDelta;
      out.dom = phi.dom + 1;
      out.cod = phi.cod + 1;
      for (Pt v : phi.values) out.values.push_back(v + 1);
      return out;
    };
    f.preimage = [](const SiteMorphism& mu) -> std::optional<SiteMorphism> {
      if (mu.site != Site::AugDelta || mu.dom < 1 || mu.cod < 1) return std::nullopt;
      SiteMorphism out;
      out.site = Site::Delta;
      out.dom = mu.dom - 1;
      out.cod = mu.cod - 1;
      for (Pt v : mu.values) out.values.push_back(v - 1);
      return out;
    };
    return f;
  }();
  return F;
}

const SiteFunctor& functor_J() {
  static const SiteFunctor F = [] {
    SiteFunctor f;
    f.name = "J";
    f.src = Site::AugDelta;
    f.dst = Site::Nabla;
    f.obj = [](int n) { return n; };
    f.map_mor = [](const SiteMorphism& mu) { return apply_J(mu); };
    f.preimage = [](const SiteMorphism& phi) -> std::optional<SiteMorphism> {
      if (phi.site != Site::Nabla) return std::nullopt;
      for (Pt v : phi.values)
        if (v == kNegInf || v == kPosInf) return std::nullopt;
      SiteMorphism out;
      out.site = Site::AugDelta;
      out.dom = phi.dom;
      out.cod = phi.cod;
      out.values = phi.values;
      return out;
    };
    return f;
  }();
  return F;
}

const SiteFunctor& functor_U() {
  static const SiteFunctor F = [] {
    SiteFunctor f;
    f.name = "U";
    f.src = Site::Nabla;
    f.dst = Site::AugDelta;
    f.obj = [](int n) { return n + 2; };
    f.map_mor = [](const SiteMorphism& phi) {
      // relabel <<m>> = {-oo,1..m,oo} as <m+2> = {1,...,m+2}
      auto enc = [&](Pt v) -> Pt {
        if (v == kNegInf) return 1;
        if (v == kPosInf) return phi.cod + 2;
        return v + 1;
      };
      SiteMorphism out;
      out.site = Site::AugDelta;
      out.dom = phi.dom + 2;
      out.cod = phi.cod + 2;
      out.values.push_back(1);
      for (Pt v : phi.values) out.values.push_back(enc(v));
      out.values.push_back(static_cast<Pt>(phi.cod + 2));
      return out;
    };
    f.preimage = [](const SiteMorphism& mu) -> std::optional<SiteMorphism> {
      if (mu.site != Site::AugDelta || mu.dom < 2 || mu.cod < 2) return std::nullopt;
      if (mu.values.front() != 1 || mu.values.back() != mu.cod) return std::nullopt;
      SiteMorphism out;
      out.site = Site::Nabla;
      out.dom = mu.dom - 2;
      out.cod = mu.cod - 2;
      for (size_t i = 1; i + 1 < mu.values.size(); ++i) {
        const Pt v = mu.values[i];
        if (v == 1)
          out.values.push_back(kNegInf);
        else if (v == mu.cod)
          out.values.push_back(kPosInf);
        else
          out.values.push_back(v - 1);
      }
      return out;
    };
    return f;
  }();
  return F;
}

namespace {

// dst-hom index of F(phi) for phi the p-th morphism in homs(src, b, a).
int32_t image_index(const SiteFunctor& F, int b, int a, int32_t p) {
  const auto& H = homs(F.src, b, a);
  const auto& HD = homs(F.dst, F.obj(b), F.obj(a));
  const int32_t q = HD.index_of(F.map_mor(H.list[p]));
  assert(q >= 0);
  return q;
}

}  // namespace

StabilityResult is_stable(const SiteFunctor& F, const CrossedGroupTable& Gt, int L) {
  for (int a = 0; a <= L; ++a)
    if (F.obj(a) > Gt.max_level)
      throw std::invalid_argument("is_stable: target truncation too small for level " +
                                  std::to_string(a));
  StabilityResult out;
  for (int a = 0; a <= L && out.stable; ++a)
    for (int b = 0; b <= L && out.stable; ++b) {
      const auto& H = homs(F.src, b, a);
      const int fa = F.obj(a), fb = F.obj(b);
      std::set<int32_t> image;
      for (int32_t p = 0; p < H.size(); ++p) image.insert(image_index(F, b, a, p));
      for (int32_t q : image)
        for (int32_t x = 0; x < Gt.order(fa); ++x) {
          const int32_t q2 = Gt.act_on(fa, fb, x, q);
          if (!image.count(q2)) {
            out.stable = false;
            out.witness = "phi=" + homs(F.dst, fb, fa).list[q].str() + " x#" + std::to_string(x);
            break;
          }
        }
    }
  return out;
}

CrossedGroupTable restrict_crossed(const SiteFunctor& F, const CrossedGroupTable& Gt, int L) {
  auto st = is_stable(F, Gt, L);
  if (!st.stable)
    throw std::invalid_argument("restrict_crossed: functor not stable, witness " + st.witness);
  CrossedGroupTable G;
  G.site = F.src;
  G.max_level = L;
  G.init_offsets();
  for (int a = 0; a <= L; ++a) {
    G.lvl[a] = Gt.lvl[F.obj(a)];
    const LevelGroup& ga = G.lvl[a];
    G.rest[a].resize(static_cast<size_t>(G.hom_total(a)) * ga.order);
    G.act[a].resize(static_cast<size_t>(G.hom_total(a)) * ga.order);
  }
  for (int a = 0; a <= L; ++a) {
    const int fa = F.obj(a);
    for (int b = 0; b <= L; ++b) {
      const int fb = F.obj(b);
      const auto& H = homs(F.src, b, a);
      const auto& HD = homs(F.dst, fb, fa);
      // inverse of the hom-map on its image
      std::vector<int32_t> img(H.size());
      std::vector<int32_t> pre(HD.size(), -1);
      for (int32_t p = 0; p < H.size(); ++p) {
        img[p] = image_index(F, b, a, p);
        pre[img[p]] = p;
      }
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t x = 0; x < G.order(a); ++x)
          G.rest[a][(static_cast<size_t>(G.hoff[a][b]) + p) * G.order(a) + x] =
              Gt.restrict_el(fa, fb, img[p], x);
      for (int32_t x = 0; x < G.order(a); ++x)
        for (int32_t p = 0; p < H.size(); ++p) {
          const int32_t q2 = Gt.act_on(fa, fb, x, img[p]);
          assert(pre[q2] >= 0 && "stability guarantees the image is closed");
          G.act[a][static_cast<size_t>(x) * G.hom_total(a) + G.hoff[a][b] + p] = pre[q2];
        }
    }
  }
  return G;
}

MonoidTable pullback_monoid(const SiteFunctor& F, const MonoidTable& M,
                            const CrossedGroupTable& restricted_base, int L) {
  MonoidTable out;
  out.X.G = &restricted_base;
  out.X.X.site = F.src;
  out.X.X.max_level = L;
  out.X.X.size.resize(L + 1);
  for (int a = 0; a <= L; ++a) out.X.X.size[a] = M.X.X.size[F.obj(a)];
  out.X.X.init_offsets();
  out.X.p.resize(L + 1);
  out.unit.resize(L + 1);
  out.mul.resize(L + 1);
  for (int a = 0; a <= L; ++a) {
    const int fa = F.obj(a);
    out.X.p[a] = M.X.p[fa];
    out.unit[a] = M.unit[fa];
    out.mul[a] = M.mul[fa];
    out.X.X.rest[a].resize(static_cast<size_t>(out.X.X.hom_total(a)) * out.X.X.size[a]);
    for (int b = 0; b <= L; ++b) {
      const auto& H = homs(F.src, b, a);
      for (int32_t p = 0; p < H.size(); ++p) {
        const int32_t q = image_index(F, b, a, p);
        for (int32_t x = 0; x < out.X.X.size[a]; ++x)
          out.X.X.rest[a][(static_cast<size_t>(out.X.X.hoff[a][b]) + p) * out.X.X.size[a] + x] =
              M.X.X.restrict_el(fa, F.obj(b), q, x);
      }
    }
  }
  return out;
}

PresheafTable ran_j(const PresheafTable& X) {
  assert(X.site == Site::Delta);
  PresheafTable Y;
  Y.site = Site::AugDelta;
  Y.max_level = X.max_level + 1;
  Y.size.resize(Y.max_level + 1);
  Y.size[0] = 1;
  for (int n = 1; n <= Y.max_level; ++n) Y.size[n] = X.size[n - 1];
  Y.init_offsets();
  const auto& jf = functor_j();
  for (int a = 0; a <= Y.max_level; ++a) {
    Y.rest[a].resize(static_cast<size_t>(Y.hom_total(a)) * Y.size[a]);
    for (int b = 0; b <= Y.max_level; ++b) {
      const auto& H = homs(Site::AugDelta, b, a);
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t x = 0; x < Y.size[a]; ++x) {
          int32_t v;
          if (b == 0)
            v = 0;  // terminal at level 0
          else {
            auto pre = jf.preimage(H.list[p]);
            assert(pre.has_value());
            const int32_t q = homs(Site::Delta, b - 1, a - 1).index_of(*pre);
            v = X.restrict_el(a - 1, b - 1, q, x);
          }
          Y.rest[a][(static_cast<size_t>(Y.hoff[a][b]) + p) * Y.size[a] + x] = v;
        }
    }
  }
  return Y;
}

CrossedGroupTable ran_j_crossed(const CrossedGroupTable& X) {
  assert(X.site == Site::Delta);
  CrossedGroupTable Y;
  Y.site = Site::AugDelta;
  Y.max_level = X.max_level + 1;
  Y.init_offsets();
  Y.lvl[0] = LevelGroup{};
  Y.lvl[0].mul = {0};
  Y.lvl[0].inv = {0};
  for (int n = 1; n <= Y.max_level; ++n) Y.lvl[n] = X.lvl[n - 1];
  const auto& jf = functor_j();
  for (int a = 0; a <= Y.max_level; ++a) {
    Y.rest[a].resize(static_cast<size_t>(Y.hom_total(a)) * Y.order(a));
    Y.act[a].resize(static_cast<size_t>(Y.hom_total(a)) * Y.order(a));
    for (int b = 0; b <= Y.max_level; ++b) {
      const auto& H = homs(Site::AugDelta, b, a);
      std::vector<int32_t> pre_idx(H.size(), -1);
      if (a >= 1 && b >= 1)
        for (int32_t p = 0; p < H.size(); ++p) {
          auto pre = jf.preimage(H.list[p]);
          pre_idx[p] = homs(Site::Delta, b - 1, a - 1).index_of(*pre);
        }
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t x = 0; x < Y.order(a); ++x) {
          const int32_t v = (b == 0) ? 0
                            : X.restrict_el(a - 1, b - 1, pre_idx[p], x);
          Y.rest[a][(static_cast<size_t>(Y.hoff[a][b]) + p) * Y.order(a) + x] = v;
        }
      for (int32_t x = 0; x < Y.order(a); ++x)
        for (int32_t p = 0; p < H.size(); ++p) {
          int32_t q = p;
          if (a >= 1 && b >= 1) {
            const int32_t qd = X.act_on(a - 1, b - 1, x, pre_idx[p]);
            q = H.index_of(jf.map_mor(homs(Site::Delta, b - 1, a - 1).list[qd]));
          }
          Y.act[a][static_cast<size_t>(x) * Y.hom_total(a) + Y.hoff[a][b] + p] = q;
        }
    }
  }
  return Y;
}

MonoidTable ran_j_monoid(const MonoidTable& M, const CrossedGroupTable& aug_base) {
  assert(M.X.X.site == Site::Delta);
  const int L = M.X.X.max_level + 1;
  MonoidTable Y;
  Y.X.G = &aug_base;
  Y.X.X.site = Site::AugDelta;
  Y.X.X.max_level = L;
  Y.X.X.size.resize(L + 1);
  Y.X.X.size[0] = 1;
  for (int n = 1; n <= L; ++n) Y.X.X.size[n] = M.X.X.size[n - 1];
  Y.X.X.init_offsets();
  Y.X.p.resize(L + 1);
  Y.unit.assign(L + 1, 0);
  Y.mul.resize(L + 1);
  Y.X.p[0] = {aug_base.lvl[0].unit};
  Y.mul[0] = {0};
  for (int n = 1; n <= L; ++n) {
    Y.X.p[n] = M.X.p[n - 1];  // indices agree: aug_base(n) = base(n-1) by construction
    Y.unit[n] = M.unit[n - 1];
    Y.mul[n] = M.mul[n - 1];
  }
  const auto& jf = functor_j();
  for (int a = 0; a <= L; ++a) {
    Y.X.X.rest[a].resize(static_cast<size_t>(Y.X.X.hom_total(a)) * Y.X.X.size[a]);
    for (int b = 0; b <= L; ++b) {
      const auto& H = homs(Site::AugDelta, b, a);
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t x = 0; x < Y.X.X.size[a]; ++x) {
          int32_t v = 0;
          if (b >= 1) {
            auto pre = jf.preimage(H.list[p]);
            const int32_t q = homs(Site::Delta, b - 1, a - 1).index_of(*pre);
            v = M.X.X.restrict_el(a - 1, b - 1, q, x);
          }
          Y.X.X.rest[a][(static_cast<size_t>(Y.X.X.hoff[a][b]) + p) * Y.X.X.size[a] + x] = v;
        }
    }
  }
  return Y;
}

SiteMorphism tau_n(int n) {
  SiteMorphism t;
  t.site = Site::Nabla;
  t.dom = n + 2;
  t.cod = n;
  t.values.push_back(kNegInf);
  for (int i = 1; i <= n; ++i) t.values.push_back(i);
  t.values.push_back(kPosInf);
  return t;
}

std::vector<std::vector<uint8_t>> theta_from_structure(const MonoidTable& M) {
  // the endpoint-swap part of the payload of p(x)
  std::vector<std::vector<uint8_t>> th(M.X.X.max_level + 1);
  for (int a = 0; a <= M.X.X.max_level; ++a) {
    th[a].resize(M.X.X.size[a]);
    for (int32_t x = 0; x < M.X.X.size[a]; ++x) {
      const WeylElem& w = M.X.G->lvl[a].elems[M.X.p[a][x]];
      th[a][x] = (w.perm[0] != 0) ? 1 : 0;
    }
  }
  return th;
}

RanInterval ran_interval_monoid(const MonoidTable& M, const std::vector<std::vector<uint8_t>>& theta,
                                const CrossedGroupTable& W_nabla) {
  assert(M.X.X.site == Site::AugDelta);
  const int L = W_nabla.max_level;
  if (M.X.X.max_level < L + 2)
    throw std::invalid_argument("ran_interval_monoid: need source levels up to n+2");
  // theta must be a degreewise monoid map
  for (int a = 0; a <= M.X.X.max_level; ++a)
    for (int32_t x = 0; x < M.X.X.size[a]; ++x)
      for (int32_t y = 0; y < M.X.X.size[a]; ++y)
        if (theta[a][M.mulxy(a, x, y)] != (theta[a][x] ^ theta[a][y]))
          throw std::invalid_argument("ran_interval_monoid: theta not multiplicative");

  RanInterval out;
  out.element_of.resize(L + 1);
  std::vector<std::vector<int32_t>> back(L + 1);
  MonoidTable& Y = out.monoid;
  Y.X.G = &W_nabla;
  Y.X.X.site = Site::Nabla;
  Y.X.X.max_level = L;
  Y.X.X.size.resize(L + 1);
  Y.X.p.resize(L + 1);
  Y.unit.resize(L + 1);
  Y.mul.resize(L + 1);
  for (int n = 0; n <= L; ++n) {
    const int k = n + 2;
    back[n].assign(M.X.X.size[k], -1);
    for (int32_t x = 0; x < M.X.X.size[k]; ++x) {
      const WeylElem& w = M.X.G->lvl[k].elems[M.X.p[k][x]];
      // w.perm is over the carrier of <<k>> (size k+2); interior extremes are
      // positions 1 and k.
      const int lo = 1, hi = k;
      const bool stab = (w.perm[lo] == lo && w.perm[hi] == hi) ||
                        (w.perm[lo] == hi && w.perm[hi] == lo);
      if (!stab) continue;
      const uint8_t t = (w.perm[lo] == hi) ? 1 : 0;
      const uint8_t e1 = (w.signs >> lo) & 1u;
      const uint8_t e2 = (w.signs >> hi) & 1u;
      if (e1 != t || e2 != t || theta[k][x] != t) continue;
      back[n][x] = static_cast<int32_t>(out.element_of[n].size());
      out.element_of[n].push_back(x);
    }
    Y.X.X.size[n] = static_cast<int32_t>(out.element_of[n].size());
    Y.X.p[n].resize(Y.X.X.size[n]);
    for (int32_t i = 0; i < Y.X.X.size[n]; ++i) {
      const WeylElem& w = M.X.G->lvl[k].elems[M.X.p[k][out.element_of[n][i]]];
      // corresponding element of W_Nabla(<<n>>): strip the outer points
      const int c = n + 2;
      Perm v(c);
      const uint8_t t = (w.perm[1] == k) ? 1 : 0;
      v[0] = t ? c - 1 : 0;
      v[c - 1] = t ? 0 : c - 1;
      for (int q = 1; q <= n; ++q) v[q] = w.perm[q + 1] - 1;
      uint32_t signs = 0;
      if (t) signs |= 1u | (1u << (c - 1));
      for (int q = 1; q <= n; ++q) signs |= ((w.signs >> (q + 1)) & 1u) << q;
      const int32_t widx = W_nabla.lvl[n].index_of(v, signs);
      assert(widx >= 0);
      Y.X.p[n][i] = widx;
    }
    Y.unit[n] = back[n][M.unit[k]];
    assert(Y.unit[n] >= 0);
    Y.mul[n].resize(static_cast<size_t>(Y.X.X.size[n]) * Y.X.X.size[n]);
    for (int32_t i = 0; i < Y.X.X.size[n]; ++i)
      for (int32_t jx = 0; jx < Y.X.X.size[n]; ++jx) {
        const int32_t z = back[n][M.mulxy(k, out.element_of[n][i], out.element_of[n][jx])];
        assert(z >= 0 && "subset not closed under multiplication");
        Y.mul[n][static_cast<size_t>(i) * Y.X.X.size[n] + jx] = z;
      }
  }
  Y.X.X.init_offsets();
  const auto& Uf = functor_U();
  for (int a = 0; a <= L; ++a) {
    Y.X.X.rest[a].resize(static_cast<size_t>(Y.X.X.hom_total(a)) * Y.X.X.size[a]);
    for (int b = 0; b <= L; ++b) {
      const auto& H = homs(Site::Nabla, b, a);
      for (int32_t p = 0; p < H.size(); ++p) {
        const SiteMorphism u = Uf.map_mor(H.list[p]);
        const int32_t q = homs(Site::AugDelta, b + 2, a + 2).index_of(u);
        assert(q >= 0);
        for (int32_t i = 0; i < Y.X.X.size[a]; ++i) {
          const int32_t r = back[b][M.X.X.restrict_el(a + 2, b + 2, q, out.element_of[a][i])];
          assert(r >= 0 && "subset not closed under Nabla restriction");
          Y.X.X.rest[a][(static_cast<size_t>(Y.X.X.hoff[a][b]) + p) * Y.X.X.size[a] + i] = r;
        }
      }
    }
  }
  return out;
}

LanInterval lan_interval(const PresheafTable& X, int cap) {
  assert(X.site == Site::AugDelta);
  const int L = std::min(cap, X.max_level);
  LanInterval out;
  out.table.site = Site::Nabla;
  out.table.max_level = L;
  out.pairs.resize(L + 1);
  out.table.size.resize(L + 1);
  for (int n = 0; n <= L; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto& H = homs(Site::Nabla, n, k);
      for (int32_t r = 0; r < H.size(); ++r) {
        if (!in_interval_class(H.list[r])) continue;
        for (int32_t x = 0; x < X.size[k]; ++x) out.pairs[n].push_back({k, x, r});
      }
    }
    out.table.size[n] = static_cast<int32_t>(out.pairs[n].size());
  }
  out.table.init_offsets();
  auto index_of_pair = [&](int n, int k, int32_t x, int32_t r) -> int32_t {
    for (size_t i = 0; i < out.pairs[n].size(); ++i) {
      const auto& pr = out.pairs[n][i];
      if (pr.k == k && pr.x == x && pr.rho == r) return static_cast<int32_t>(i);
    }
    return -1;
  };
  for (int a = 0; a <= L; ++a) {
    out.table.rest[a].resize(static_cast<size_t>(out.table.hom_total(a)) * out.table.size[a]);
    for (int b = 0; b <= L; ++b) {
      const auto& H = homs(Site::Nabla, b, a);
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t i = 0; i < out.table.size[a]; ++i) {
          const auto& pr = out.pairs[a][i];
          const SiteMorphism c = compose(homs(Site::Nabla, a, pr.k).list[pr.rho], H.list[p]);
          const IntervalFactorization f = interval_factor(c);
          const int32_t mu = homs(Site::AugDelta, f.mu.dom, pr.k).index_of(f.mu);
          const int32_t x2 = X.restrict_el(pr.k, f.mu.dom, mu, pr.x);
          const int32_t r2 = homs(Site::Nabla, b, f.mu.dom).index_of(f.rho);
          const int32_t v = index_of_pair(b, f.mu.dom, x2, r2);
          assert(v >= 0);
          out.table.rest[a][(static_cast<size_t>(out.table.hoff[a][b]) + p) * out.table.size[a] +
                            i] = v;
        }
    }
  }
  return out;
}

// --- pi0 ---

namespace {

struct UnionFind {
  std::vector<int32_t> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int32_t find(int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int32_t a, int32_t b) { parent[find(a)] = find(b); }
};

}  // namespace

Pi0Monoid pi0_monoid(const MonoidTable& M) {
  assert(M.X.X.site == Site::Delta && M.X.X.max_level >= 1);
  const int32_t n0 = M.X.X.size[0];
  UnionFind uf(n0);
  const auto& H01 = homs(Site::Delta, 0, 1);
  assert(H01.size() == 2);
  for (int32_t x = 0; x < M.X.X.size[1]; ++x)
    uf.unite(M.X.X.restrict_el(1, 0, 0, x), M.X.X.restrict_el(1, 0, 1, x));
  Pi0Monoid out;
  out.class_of.assign(n0, -1);
  for (int32_t x = 0; x < n0; ++x) {
    const int32_t r = uf.find(x);
    if (out.class_of[r] < 0) {
      out.class_of[r] = out.size++;
      out.rep_of.push_back(r);
    }
  }
  for (int32_t x = 0; x < n0; ++x) out.class_of[x] = out.class_of[uf.find(x)];
  out.mul.resize(static_cast<size_t>(out.size) * out.size);
  for (int32_t c = 0; c < out.size; ++c)
    for (int32_t d = 0; d < out.size; ++d)
      out.mul[static_cast<size_t>(c) * out.size + d] =
          out.class_of[M.mulxy(0, out.rep_of[c], out.rep_of[d])];
  // representative independence, exhaustively
  for (int32_t u = 0; u < n0 && out.well_defined; ++u)
    for (int32_t v = 0; v < n0; ++v) {
      const int32_t expect =
          out.mul[static_cast<size_t>(out.class_of[u]) * out.size + out.class_of[v]];
      if (out.class_of[M.mulxy(0, u, v)] != expect) {
        out.well_defined = false;
        out.failure = "product of classes depends on representatives at (" + std::to_string(u) +
                      "," + std::to_string(v) + ")";
        break;
      }
    }
  return out;
}

// --- Lan word object ---

LanCrossedMonoid::LanCrossedMonoid(const SiteFunctor& F, const MonoidTable& M,
                                   const CrossedGroupTable& Gt, int out_max_level, int word_cap)
    : F_(&F), M_(&M), Gt_(&Gt), out_L_(out_max_level), cap_(word_cap) {
  if (F.src == Site::Delta) {
    // connected-component representatives for the <0> level
    const int L = M.X.X.max_level;
    std::vector<int32_t> offset(L + 2, 0);
    for (int b = 0; b <= L; ++b) offset[b + 1] = offset[b] + M.X.X.size[b];
    UnionFind uf(offset[L + 1]);
    for (int a = 0; a <= L; ++a)
      for (int b = 0; b <= L; ++b) {
        const int H = homs(Site::Delta, b, a).size();
        for (int32_t p = 0; p < H; ++p)
          for (int32_t x = 0; x < M.X.X.size[a]; ++x)
            uf.unite(offset[a] + x, offset[b] + M.X.X.restrict_el(a, b, p, x));
      }
    // minimal representative in M([0]) per class
    std::vector<int32_t> min0(offset[L + 1], -1);
    for (int32_t x = 0; x < M.X.X.size[0]; ++x) {
      const int32_t r = uf.find(x);
      if (min0[r] < 0) min0[r] = x;
    }
    comp_rep_.resize(L + 1);
    for (int b = 0; b <= L; ++b) {
      comp_rep_[b].resize(M.X.X.size[b]);
      for (int32_t x = 0; x < M.X.X.size[b]; ++x) {
        const int32_t r = uf.find(offset[b] + x);
        assert(min0[r] >= 0 && "every component meets level zero via vertex maps");
        comp_rep_[b][x] = min0[r];
      }
    }
  }
}

int32_t LanCrossedMonoid::component_rep(int b, int32_t x) const { return comp_rep_[b][x]; }

LanLetter LanCrossedMonoid::canon_letter(int out_level, LanLetter l) const {
  const Site dst = F_->dst;
  if (F_->src == Site::AugDelta) {
    // factor phi = J(mu) ∘ rho through the interval class
    const auto& H = homs(dst, out_level, F_->obj(l.b));
    const IntervalFactorization f = interval_factor(H.list[l.phi]);
    const int32_t mu = homs(Site::AugDelta, f.mu.dom, l.b).index_of(f.mu);
    LanLetter out;
    out.b = f.mu.dom;
    out.x = M_->X.X.restrict_el(l.b, f.mu.dom, mu, l.x);
    out.phi = homs(dst, out_level, f.mu.dom).index_of(f.rho);
    assert(out.phi >= 0);
    return out;
  }
  // F = j: levels <n+1> are in the image; <0> collapses to components
  if (out_level >= 1) {
    const auto& H = homs(dst, out_level, F_->obj(l.b));
    auto pre = F_->preimage(H.list[l.phi]);
    assert(pre.has_value());
    const int32_t q = homs(Site::Delta, out_level - 1, l.b).index_of(*pre);
    LanLetter out;
    out.b = out_level - 1;
    out.x = M_->X.X.restrict_el(l.b, out_level - 1, q, l.x);
    out.phi = identity_index(dst, out_level);
    return out;
  }
  LanLetter out;
  out.b = 0;
  out.x = comp_rep_[l.b][l.x];
  out.phi = 0;  // the unique map <0> -> <1>
  return out;
}

LanWord LanCrossedMonoid::reduce(int out_level, LanWord w) const {
  for (auto& l : w) l = canon_letter(out_level, l);
  LanWord out;
  for (const auto& l : w) {
    if (l.x == M_->unit[l.b]) continue;  // unit letters vanish
    out.push_back(l);
    // merge while the tail pair lines up: [x, phi^y][y, phi] -> [xy, phi]
    while (out.size() >= 2) {
      const LanLetter& v = out[out.size() - 1];
      const LanLetter& u = out[out.size() - 2];
      if (u.b != v.b) break;
      const int fb = F_->obj(v.b);
      const int32_t twisted = Gt_->act_on(fb, out_level, M_->X.p[v.b][v.x], v.phi);
      if (u.phi != twisted) break;
      LanLetter m;
      m.b = v.b;
      m.x = M_->mulxy(v.b, u.x, v.x);
      m.phi = v.phi;
      m = canon_letter(out_level, m);
      out.pop_back();
      out.pop_back();
      if (m.x != M_->unit[m.b]) out.push_back(m);
    }
  }
  return out;
}

LanWord LanCrossedMonoid::concat(int out_level, const LanWord& u, const LanWord& v) const {
  LanWord w = u;
  w.insert(w.end(), v.begin(), v.end());
  if (static_cast<int>(w.size()) > cap_) throw CapExceeded("lan word cap exceeded");
  return reduce(out_level, std::move(w));
}

int32_t LanCrossedMonoid::structure(int out_level, const LanWord& w) const {
  int32_t g = Gt_->lvl[out_level].unit;
  for (const auto& l : w) {
    const int fb = F_->obj(l.b);
    g = Gt_->lvl[out_level].mulxy(g, Gt_->restrict_el(fb, out_level, l.phi, M_->X.p[l.b][l.x]));
  }
  return g;
}

LanWord LanCrossedMonoid::unit_of(int b, int32_t x) const {
  LanLetter l;
  l.b = b;
  l.x = x;
  l.phi = identity_index(F_->dst, F_->obj(b));
  return {l};
}

LanWord LanCrossedMonoid::restrict_word(int from_level, int to_level, int32_t psi,
                                        const LanWord& w) const {
  const Site dst = F_->dst;
  LanWord out(w.size());
  int32_t suffix = Gt_->lvl[from_level].unit;
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
    const LanLetter& l = w[i];
    const int fb = F_->obj(l.b);
    // psi twisted by the suffix structure product, then composed into phi
    const int32_t tw = Gt_->act_on(from_level, to_level, suffix, psi);
    const auto& cmp = comp_table(dst, to_level, from_level, fb);
    out[i] = LanLetter{l.b, l.x,
                       cmp[static_cast<size_t>(l.phi) * homs(dst, to_level, from_level).size() + tw]};
    suffix = Gt_->lvl[from_level].mulxy(
        Gt_->restrict_el(fb, from_level, l.phi, M_->X.p[l.b][l.x]), suffix);
  }
  return reduce(to_level, std::move(out));
}

bool LanCrossedMonoid::check_confluence(int out_level, const LanWord& w, std::string* why) const {
  const LanWord nf = reduce(out_level, w);
  const int32_t sv = structure(out_level, w);
  if (sv != structure(out_level, nf)) {
    if (why) *why = "reduction changed the structure map";
    return false;
  }
  // one-step relation neighbours must share the normal form
  std::vector<LanWord> nbrs;
  const Site dst = F_->dst;
  for (size_t i = 0; i < w.size(); ++i) {
    const LanLetter& l = w[i];
    // unit insertion on either side
    LanWord ins = w;
    ins.insert(ins.begin() + i, LanLetter{l.b, M_->unit[l.b], l.phi});
    if (static_cast<int>(ins.size()) <= cap_) nbrs.push_back(ins);
    // split x = u*v over the same phi: enumerate factorizations
    for (int32_t u = 0; u < M_->X.X.size[l.b]; ++u)
      for (int32_t v = 0; v < M_->X.X.size[l.b]; ++v)
        if (M_->mulxy(l.b, u, v) == l.x) {
          LanWord sp = w;
          const int fb = F_->obj(l.b);
          const int32_t twisted = Gt_->act_on(fb, out_level, M_->X.p[l.b][v], l.phi);
          sp[i] = LanLetter{l.b, v, l.phi};
          sp.insert(sp.begin() + i, LanLetter{l.b, u, twisted});
          if (static_cast<int>(sp.size()) <= cap_) nbrs.push_back(sp);
        }
    // pull back along a functor-image factor: phi = F(theta) ∘ rho
    const auto& H = homs(dst, out_level, F_->obj(l.b));
    for (int b2 = 0; b2 <= M_->X.X.max_level; ++b2) {
      const auto& Hth = homs(F_->src, b2, l.b);
      const auto& Hrho = homs(dst, out_level, F_->obj(b2));
      for (int32_t t = 0; t < Hth.size(); ++t) {
        const SiteMorphism ft = F_->map_mor(Hth.list[t]);
        for (int32_t r = 0; r < Hrho.size(); ++r)
          if (homs(dst, out_level, F_->obj(l.b)).index_of(compose(ft, Hrho.list[r])) == l.phi) {
            LanWord pb = w;
            pb[i] = LanLetter{b2, M_->X.X.restrict_el(l.b, b2, t, l.x), r};
            nbrs.push_back(pb);
          }
      }
    }
    (void)H;
  }
  for (const auto& nb : nbrs) {
    if (reduce(out_level, nb) != nf) {
      if (why) *why = "distinct normal forms for congruent words";
      return false;
    }
  }
  return true;
}

}  // namespace crs
