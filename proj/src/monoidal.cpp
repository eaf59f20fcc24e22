#include "crs/monoidal.hpp"

#include <cassert>

namespace crs {

void PresheafTable::init_offsets() {
  hoff.assign(max_level + 1, std::vector<int32_t>(max_level + 2, 0));
  rest.resize(max_level + 1);
  for (int a = 0; a <= max_level; ++a) {
    int32_t off = 0;
    for (int b = 0; b <= max_level; ++b) {
      hoff[a][b] = off;
      off += homs(site, b, a).size();
    }
    hoff[a][max_level + 1] = off;
  }
}

bool verify_presheaf(const PresheafTable& X, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const int L = X.max_level;
  for (int a = 0; a <= L; ++a) {
    const int32_t idp = identity_index(X.site, a);
    for (int32_t x = 0; x < X.size[a]; ++x)
      if (X.restrict_el(a, a, idp, x) != x) return fail("id law at level " + std::to_string(a));
  }
  for (int c = 0; c <= L; ++c)
    for (int b = 0; b <= L; ++b)
      for (int a = 0; a <= L; ++a) {
        const HomSet& Hbc = homs(X.site, b, c);
        const HomSet& Hab = homs(X.site, a, b);
        const auto& cmp = comp_table(X.site, a, b, c);
        for (int32_t ps = 0; ps < Hbc.size(); ++ps)
          for (int32_t ph = 0; ph < Hab.size(); ++ph) {
            const int32_t cidx = cmp[static_cast<size_t>(ps) * Hab.size() + ph];
            for (int32_t x = 0; x < X.size[c]; ++x)
              if (X.restrict_el(c, a, cidx, x) !=
                  X.restrict_el(b, a, ph, X.restrict_el(c, b, ps, x)))
                return fail("composition law");
          }
      }
  return true;
}

PresheafTable terminal_presheaf(Site s, int max_level) {
  PresheafTable X;
  X.site = s;
  X.max_level = max_level;
  X.size.assign(max_level + 1, 1);
  X.init_offsets();
  for (int a = 0; a <= max_level; ++a) X.rest[a].assign(X.hom_total(a), 0);
  return X;
}

PresheafTable underlying_presheaf(const CrossedGroupTable& G) {
  PresheafTable X;
  X.site = G.site;
  X.max_level = G.max_level;
  X.size.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) X.size[a] = G.order(a);
  X.init_offsets();
  for (int a = 0; a <= G.max_level; ++a) X.rest[a] = G.rest[a];
  return X;
}

PresheafTable representable_presheaf(Site s, int max_level, int a0) {
  PresheafTable X;
  X.site = s;
  X.max_level = max_level;
  X.size.resize(max_level + 1);
  for (int a = 0; a <= max_level; ++a) X.size[a] = homs(s, a, a0).size();
  X.init_offsets();
  for (int a = 0; a <= max_level; ++a) {
    X.rest[a].resize(static_cast<size_t>(X.hom_total(a)) * X.size[a]);
    for (int b = 0; b <= max_level; ++b) {
      const HomSet& H = homs(s, b, a);
      const auto& cmp = comp_table(s, b, a, a0);  // hom(a,a0) x hom(b,a) -> hom(b,a0)
      for (int32_t p = 0; p < H.size(); ++p)
        for (int32_t x = 0; x < X.size[a]; ++x)
          X.rest[a][(static_cast<size_t>(X.hoff[a][b]) + p) * X.size[a] + x] =
              cmp[static_cast<size_t>(x) * H.size() + p];
    }
  }
  return X;
}

bool presheaves_equal(const PresheafTable& A, const PresheafTable& B, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (A.site != B.site || A.max_level != B.max_level) return fail("site/truncation");
  if (A.size != B.size) return fail("level sizes");
  for (int a = 0; a <= A.max_level; ++a)
    if (A.rest[a] != B.rest[a]) return fail("restriction at level " + std::to_string(a));
  return true;
}

bool verify_sliced(const SlicedObject& X, std::string* why) {
  if (!verify_presheaf(X.X, why)) return false;
  const auto& G = *X.G;
  for (int a = 0; a <= X.X.max_level; ++a)
    for (int b = 0; b <= X.X.max_level; ++b) {
      const int H = homs(X.X.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t x = 0; x < X.X.size[a]; ++x)
          if (X.p[b][X.X.restrict_el(a, b, p, x)] != G.restrict_el(a, b, p, X.p[a][x])) {
            if (why) *why = "structure map not natural";
            return false;
          }
    }
  return true;
}

SlicedObject unit_sliced(const CrossedGroupTable& G) {
  SlicedObject X;
  X.X = terminal_presheaf(G.site, G.max_level);
  X.G = &G;
  X.p.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) X.p[a] = {G.lvl[a].unit};
  return X;
}

SlicedObject group_as_sliced(const CrossedGroupTable& G) {
  SlicedObject X;
  X.X = underlying_presheaf(G);
  X.G = &G;
  X.p.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) {
    X.p[a].resize(G.order(a));
    for (int32_t x = 0; x < G.order(a); ++x) X.p[a][x] = x;
  }
  return X;
}

SlicedObject sliced_from_map(const CrossedGroupMap& m) {
  SlicedObject X;
  X.X = underlying_presheaf(*m.src);
  X.G = m.dst;
  X.p = m.f;
  return X;
}

SlicedObject representable_sliced(const CrossedGroupTable& G, int a0, int32_t x0) {
  SlicedObject X;
  X.X = representable_presheaf(G.site, G.max_level, a0);
  X.G = &G;
  X.p.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) {
    X.p[a].resize(X.X.size[a]);
    for (int32_t ph = 0; ph < X.X.size[a]; ++ph)
      X.p[a][ph] = G.restrict_el(a0, a, ph, x0);
  }
  return X;
}

PresheafTable semidirect(const PresheafTable& K, const SlicedObject& X) {
  if (K.site != X.X.site || K.max_level != X.X.max_level)
    throw std::invalid_argument("semidirect: level mismatch");
  PresheafTable P;
  P.site = K.site;
  P.max_level = K.max_level;
  P.size.resize(K.max_level + 1);
  for (int a = 0; a <= K.max_level; ++a) P.size[a] = K.size[a] * X.X.size[a];
  P.init_offsets();
  for (int a = 0; a <= K.max_level; ++a) {
    P.rest[a].resize(static_cast<size_t>(P.hom_total(a)) * P.size[a]);
    for (int b = 0; b <= K.max_level; ++b) {
      const int H = homs(K.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t k = 0; k < K.size[a]; ++k)
          for (int32_t x = 0; x < X.X.size[a]; ++x) {
            const int32_t phix = X.act_on(a, b, x, p);              // phi^x
            const int32_t kr = K.restrict_el(a, b, phix, k);        // (phi^x)*(k)
            const int32_t xr = X.X.restrict_el(a, b, p, x);         // phi*(x)
            P.rest[a][(static_cast<size_t>(P.hoff[a][b]) + p) * P.size[a] + k * X.X.size[a] + x] =
                kr * X.X.size[b] + xr;
          }
    }
  }
  return P;
}

SlicedObject rtimes(const SlicedObject& X, const SlicedObject& Y) {
  if (X.G != Y.G) throw std::invalid_argument("rtimes: mismatched base crossed group");
  SlicedObject P;
  P.X = semidirect(X.X, Y);
  P.G = X.G;
  P.p.resize(P.X.max_level + 1);
  for (int a = 0; a <= P.X.max_level; ++a) {
    P.p[a].resize(P.X.size[a]);
    for (int32_t x = 0; x < X.X.size[a]; ++x)
      for (int32_t y = 0; y < Y.X.size[a]; ++y)
        P.p[a][x * Y.X.size[a] + y] = X.G->lvl[a].mulxy(X.p[a][x], Y.p[a][y]);
  }
  return P;
}

bool verify_sliced_map(const SlicedMap& m, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const auto& X = *m.src;
  const auto& Y = *m.dst;
  for (int a = 0; a <= X.X.max_level; ++a) {
    for (int32_t x = 0; x < X.X.size[a]; ++x)
      if (Y.p[a][m.f[a][x]] != X.p[a][x]) return fail("not over G");
    for (int b = 0; b <= X.X.max_level; ++b) {
      const int H = homs(X.X.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t x = 0; x < X.X.size[a]; ++x)
          if (m.f[b][X.X.restrict_el(a, b, p, x)] != Y.X.restrict_el(a, b, p, m.f[a][x]))
            return fail("not natural");
    }
  }
  return true;
}

bool check_crs_naturality(const SlicedMap& m, std::string* why) {
  const auto& X = *m.src;
  const auto& Y = *m.dst;
  for (int a = 0; a <= X.X.max_level; ++a)
    for (int b = 0; b <= X.X.max_level; ++b) {
      const int H = homs(X.X.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t x = 0; x < X.X.size[a]; ++x) {
          // crs_X(x, phi) = (phi^x, phi*(x)); apply f on the second leg
          const int32_t lhs_phi = X.act_on(a, b, x, p);
          const int32_t lhs_el = m.f[b][X.X.restrict_el(a, b, p, x)];
          const int32_t rhs_phi = Y.act_on(a, b, m.f[a][x], p);
          const int32_t rhs_el = Y.X.restrict_el(a, b, p, m.f[a][x]);
          if (lhs_phi != rhs_phi || lhs_el != rhs_el) {
            if (why) *why = "crs naturality fails";
            return false;
          }
        }
    }
  return true;
}

bool verify_monoid(const MonoidTable& M, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (!verify_sliced(M.X, why)) return false;
  const auto& G = *M.X.G;
  for (int a = 0; a <= M.X.X.max_level; ++a) {
    const int32_t n = M.X.X.size[a];
    for (int32_t x = 0; x < n; ++x) {
      if (M.mulxy(a, M.unit[a], x) != x || M.mulxy(a, x, M.unit[a]) != x)
        return fail("monoid unit law");
      for (int32_t y = 0; y < n; ++y) {
        // structure map is multiplicative (mu is over G)
        if (M.X.p[a][M.mulxy(a, x, y)] !=
            G.lvl[a].mulxy(M.X.p[a][x], M.X.p[a][y]))
          return fail("mu not over G");
        for (int32_t z = 0; z < n; ++z)
          if (M.mulxy(a, M.mulxy(a, x, y), z) != M.mulxy(a, x, M.mulxy(a, y, z)))
            return fail("monoid associativity");
      }
    }
    if (M.X.p[a][M.unit[a]] != G.lvl[a].unit) return fail("unit not over G");
  }
  // mu : M ⋊ M -> M is a map of A-sets: mu(phi*(x,y)) = phi*(mu(x,y)) with
  // the twisted restriction on the left.
  for (int a = 0; a <= M.X.X.max_level; ++a)
    for (int b = 0; b <= M.X.X.max_level; ++b) {
      const int H = homs(M.X.X.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t x = 0; x < M.X.X.size[a]; ++x)
          for (int32_t y = 0; y < M.X.X.size[a]; ++y) {
            const int32_t phiy = M.X.act_on(a, b, y, p);
            const int32_t xr = M.X.X.restrict_el(a, b, phiy, x);
            const int32_t yr = M.X.X.restrict_el(a, b, p, y);
            if (M.mulxy(b, xr, yr) != M.X.X.restrict_el(a, b, p, M.mulxy(a, x, y)))
              return fail("mu not natural");
          }
    }
  return true;
}

MonoidTable crossed_group_as_monoid(const CrossedGroupMap& structure) {
  const CrossedGroupTable& H = *structure.src;
  MonoidTable M;
  M.X = sliced_from_map(structure);
  M.unit.resize(H.max_level + 1);
  M.mul.resize(H.max_level + 1);
  for (int a = 0; a <= H.max_level; ++a) {
    M.unit[a] = H.lvl[a].unit;
    M.mul[a].resize(static_cast<size_t>(H.order(a)) * H.order(a));
    for (int32_t x = 0; x < H.order(a); ++x)
      for (int32_t y = 0; y < H.order(a); ++y)
        M.mul[a][static_cast<size_t>(x) * H.order(a) + y] = H.lvl[a].mulxy(x, y);
  }
  return M;
}

Invertibles invertibles(const MonoidTable& M) {
  const int L = M.X.X.max_level;
  const Site s = M.X.X.site;
  Invertibles out;
  out.element_of.resize(L + 1);
  std::vector<std::vector<int32_t>> back(L + 1);
  out.table.site = s;
  out.table.max_level = L;
  out.table.init_offsets();
  for (int a = 0; a <= L; ++a) {
    const int32_t n = M.X.X.size[a];
    back[a].assign(n, -1);
    std::vector<int32_t> inv_of(n, -1);
    for (int32_t x = 0; x < n; ++x)
      for (int32_t y = 0; y < n; ++y)
        if (M.mulxy(a, x, y) == M.unit[a] && M.mulxy(a, y, x) == M.unit[a]) inv_of[x] = y;
    for (int32_t x = 0; x < n; ++x)
      if (inv_of[x] >= 0) {
        back[a][x] = static_cast<int32_t>(out.element_of[a].size());
        out.element_of[a].push_back(x);
      }
    LevelGroup& g = out.table.lvl[a];
    g.order = static_cast<int32_t>(out.element_of[a].size());
    g.unit = back[a][M.unit[a]];
    g.mul.resize(static_cast<size_t>(g.order) * g.order);
    g.inv.resize(g.order);
    for (int32_t i = 0; i < g.order; ++i) {
      g.inv[i] = back[a][inv_of[out.element_of[a][i]]];
      for (int32_t j = 0; j < g.order; ++j) {
        const int32_t z = back[a][M.mulxy(a, out.element_of[a][i], out.element_of[a][j])];
        assert(z >= 0);
        g.mul[static_cast<size_t>(i) * g.order + j] = z;
      }
    }
  }
  for (int a = 0; a <= L; ++a) {
    const int tot = out.table.hom_total(a);
    out.table.rest[a].resize(static_cast<size_t>(tot) * out.table.order(a));
    out.table.act[a].resize(static_cast<size_t>(tot) * out.table.order(a));
    for (int b = 0; b <= L; ++b) {
      const int H = homs(s, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t i = 0; i < out.table.order(a); ++i) {
          const int32_t x = out.element_of[a][i];
          const int32_t r = back[b][M.X.X.restrict_el(a, b, p, x)];
          assert(r >= 0 && "invertibles not closed under restriction");
          out.table.rest[a][(static_cast<size_t>(out.table.hoff[a][b]) + p) * out.table.order(a) +
                            i] = r;
        }
      for (int32_t i = 0; i < out.table.order(a); ++i)
        for (int32_t p = 0; p < H; ++p)
          out.table.act[a][static_cast<size_t>(i) * tot + out.table.hoff[a][b] + p] =
              M.X.act_on(a, b, out.element_of[a][i], p);
    }
  }
  out.structure.src = &out.table;
  out.structure.dst = M.X.G;
  out.structure.f.resize(L + 1);
  for (int a = 0; a <= L; ++a)
    for (int32_t x : out.element_of[a]) out.structure.f[a].push_back(M.X.p[a][x]);
  return out;
}

FreeCrossedMonoid::Word FreeCrossedMonoid::concat(const Word& u, const Word& v) const {
  if (static_cast<int>(u.size() + v.size()) > cap)
    throw CapExceeded("free monoid: word cap exceeded");
  Word w = u;
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

int32_t FreeCrossedMonoid::structure(int a, const Word& w) const {
  int32_t g = X->G->lvl[a].unit;
  for (int32_t letter : w) g = X->G->lvl[a].mulxy(g, X->p[a][letter]);
  return g;
}

FreeCrossedMonoid::Word FreeCrossedMonoid::restrict_word(int a, int b, int32_t phi,
                                                         const Word& w) const {
  // (phi^{p(x_{k+1})...p(x_n)})*(x_k) per letter, telescoping from the right
  Word out(w.size());
  int32_t suffix = X->G->lvl[a].unit;
  for (int k = static_cast<int>(w.size()) - 1; k >= 0; --k) {
    const int32_t twisted = X->G->act_on(a, b, suffix, phi);
    out[k] = X->X.restrict_el(a, b, twisted, w[k]);
    suffix = X->G->lvl[a].mulxy(X->p[a][w[k]], suffix);
  }
  return out;
}

int64_t FreeCrossedMonoid::count_words(int a) const {
  int64_t total = 0, pow = 1;
  for (int k = 0; k <= cap; ++k) {
    total += pow;
    pow *= X->X.size[a];
  }
  return total;
}

}  // namespace crs
