#include "crs/group_table.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "crs/parallel.hpp"

namespace crs {

WeylElem weyl_mul(const WeylElem& a, const WeylElem& b) {
  WeylElem r;
  r.perm = perm_compose(a.perm, b.perm);
  const int k = static_cast<int>(r.perm.size());
  uint32_t s = 0;
  for (int i = 0; i < k; ++i) {
    uint32_t bit = ((a.signs >> b.perm[i]) ^ (b.signs >> i)) & 1u;
    s |= bit << i;
  }
  r.signs = s;
  return r;
}

WeylElem weyl_inv(const WeylElem& a) {
  WeylElem r;
  r.perm = perm_invert(a.perm);
  const int k = static_cast<int>(r.perm.size());
  uint32_t s = 0;
  for (int i = 0; i < k; ++i) s |= ((a.signs >> r.perm[i]) & 1u) << i;
  r.signs = s;
  return r;
}

void LevelGroup::build_lookup() {
  carrier = elems.empty() ? 0 : static_cast<int>(elems[0].perm.size());
  const size_t span = static_cast<size_t>(factorial(carrier)) << carrier;
  lookup.assign(span, -1);
  for (size_t i = 0; i < elems.size(); ++i) {
    size_t key = (static_cast<size_t>(perm_lehmer(elems[i].perm)) << carrier) | elems[i].signs;
    lookup[key] = static_cast<int32_t>(i);
  }
}

int32_t LevelGroup::index_of(const Perm& p, uint32_t signs) const {
  const size_t key = (static_cast<size_t>(perm_lehmer(p)) << carrier) | signs;
  if (key >= lookup.size()) return -1;
  return lookup[key];
}

void LevelGroup::build_dense_from_payload() {
  if (order > kDenseMulCap) return;
  mul.assign(static_cast<size_t>(order) * order, -1);
  for (int32_t x = 0; x < order; ++x)
    for (int32_t y = 0; y < order; ++y) {
      WeylElem w = weyl_mul(elems[x], elems[y]);
      int32_t z = index_of(w.perm, w.signs);
      assert(z >= 0);
      mul[static_cast<size_t>(x) * order + y] = z;
    }
}

int32_t LevelGroup::mulxy(int32_t x, int32_t y) const {
  if (!mul.empty()) return mul[static_cast<size_t>(x) * order + y];
  WeylElem w = weyl_mul(elems[x], elems[y]);
  int32_t z = index_of(w.perm, w.signs);
  assert(z >= 0);
  return z;
}

void CrossedGroupTable::init_offsets() {
  lvl.resize(max_level + 1);
  hoff.assign(max_level + 1, std::vector<int32_t>(max_level + 2, 0));
  rest.resize(max_level + 1);
  act.resize(max_level + 1);
  for (int a = 0; a <= max_level; ++a) {
    int32_t off = 0;
    for (int b = 0; b <= max_level; ++b) {
      hoff[a][b] = off;
      off += homs(site, b, a).size();
    }
    hoff[a][max_level + 1] = off;
  }
}

TotalMor total_identity(const CrossedGroupTable& G, int a) {
  return TotalMor{a, a, identity_index(G.site, a), G.lvl[a].unit};
}

TotalMor total_compose(const CrossedGroupTable& G, const TotalMor& psi_y,
                       const TotalMor& phi_x) {
  if (phi_x.cod != psi_y.dom) throw std::invalid_argument("total_compose: level mismatch");
  const int a = phi_x.dom, b = psi_y.dom, c = psi_y.cod;
  const int32_t phi_y = G.act_on(b, a, psi_y.x, phi_x.phi);
  const auto& cmp = comp_table(G.site, a, b, c);
  const int32_t comp_idx = cmp[static_cast<size_t>(psi_y.phi) * homs(G.site, a, b).size() + phi_y];
  const int32_t xr = G.lvl[a].mulxy(G.restrict_el(b, a, phi_x.phi, psi_y.x), phi_x.x);
  return TotalMor{a, c, comp_idx, xr};
}

void VerifyReport::add(const std::string& kind, const std::string& detail) {
  ok = false;
  violations.push_back({kind, detail});
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os << (ok ? "PASS" : "FAIL") << " (" << checks << " checks";
  if (!ok) os << ", " << violations.size() << " violations reported";
  os << ")";
  for (const auto& v : violations) os << "\n  [" << v.kind << "] " << v.detail;
  return os.str();
}

namespace {

class Reporter {
 public:
  Reporter(VerifyReport* rep, int cap) : rep_(rep), cap_(cap) {}
  void violation(const std::string& kind, const std::string& detail) {
    std::lock_guard<std::mutex> lk(mu_);
    rep_->ok = false;
    if (static_cast<int>(rep_->violations.size()) < cap_) rep_->violations.push_back({kind, detail});
  }
  void count(uint64_t n) { counted_.fetch_add(n, std::memory_order_relaxed); }
  void flush() { rep_->checks += counted_.exchange(0); }
  bool any() const { return !rep_->ok; }

 private:
  VerifyReport* rep_;
  int cap_;
  std::mutex mu_;
  std::atomic<uint64_t> counted_{0};
};

// Column-major multiplication cache: col[y*order + x] = x*y.
std::vector<uint16_t> build_colmul(const LevelGroup& g, int threads) {
  std::vector<uint16_t> col(static_cast<size_t>(g.order) * g.order);
  parallel_for(g.order, threads, [&](int y) {
    uint16_t* c = col.data() + static_cast<size_t>(y) * g.order;
    if (!g.mul.empty()) {
      for (int32_t x = 0; x < g.order; ++x)
        c[x] = static_cast<uint16_t>(g.mul[static_cast<size_t>(x) * g.order + y]);
    } else {
      for (int32_t x = 0; x < g.order; ++x) c[x] = static_cast<uint16_t>(g.mulxy(x, y));
    }
  });
  return col;
}

std::string el(int a, int32_t x) {
  return "G(" + std::to_string(a) + ")#" + std::to_string(x);
}

}  // namespace

namespace {
VerifyReport verify_crossed_axioms_impl(const CrossedGroupTable& G, const VerifyOptions& opts);
}

VerifyReport verify_crossed_axioms(const CrossedGroupTable& G, const VerifyOptions& opts) {
  VerifyReport rep = verify_crossed_axioms_impl(G, opts);
  // deterministic output independent of thread scheduling
  std::sort(rep.violations.begin(), rep.violations.end(),
            [](const AxiomViolation& a, const AxiomViolation& b) {
              return std::tie(a.kind, a.detail) < std::tie(b.kind, b.detail);
            });
  return rep;
}

namespace {
VerifyReport verify_crossed_axioms_impl(const CrossedGroupTable& G, const VerifyOptions& opts) {
  VerifyReport rep;
  Reporter out(&rep, opts.max_violations);
  const Site s = G.site;
  const int L = G.max_level;
  const int threads = opts.threads > 0 ? opts.threads : default_threads();

  // ---- structural sanity ----
  for (int a = 0; a <= L; ++a) {
    const LevelGroup& g = G.lvl[a];
    if (g.order <= 0 || g.unit < 0 || g.unit >= g.order)
      out.violation("malformed", "level " + std::to_string(a) + ": bad order/unit");
    if (static_cast<int>(g.inv.size()) != g.order)
      out.violation("malformed", "level " + std::to_string(a) + ": missing inverses");
    if (!g.payload_based() &&
        g.mul.size() != static_cast<size_t>(g.order) * g.order)
      out.violation("malformed", "level " + std::to_string(a) + ": mul table size");
    if (G.rest[a].size() != static_cast<size_t>(G.hom_total(a)) * g.order)
      out.violation("malformed", "level " + std::to_string(a) + ": restriction table size");
    if (G.act[a].size() != static_cast<size_t>(G.hom_total(a)) * g.order)
      out.violation("malformed", "level " + std::to_string(a) + ": action table size");
  }
  if (out.any()) return rep;

  // ---- group laws ----
  for (int a = 0; a <= L; ++a) {
    const LevelGroup& g = G.lvl[a];
    for (int32_t x = 0; x < g.order; ++x) {
      if (g.mulxy(g.unit, x) != x || g.mulxy(x, g.unit) != x)
        out.violation("group-unit", el(a, x));
      if (g.mulxy(x, g.inv[x]) != g.unit || g.mulxy(g.inv[x], x) != g.unit)
        out.violation("group-inverse", el(a, x));
    }
    out.count(2 * static_cast<uint64_t>(g.order));
    if (opts.deep_group_check && !g.payload_based() && g.order <= 256) {
      for (int32_t x = 0; x < g.order && !out.any(); ++x)
        for (int32_t y = 0; y < g.order; ++y)
          for (int32_t z = 0; z < g.order; ++z)
            if (g.mulxy(g.mulxy(x, y), z) != g.mulxy(x, g.mulxy(y, z))) {
              out.violation("group-assoc", el(a, x) + "," + el(a, y) + "," + el(a, z));
              break;
            }
      out.count(static_cast<uint64_t>(g.order) * g.order * g.order);
    }
  }
  if (out.any()) return rep;

  // ---- presheaf unit laws and unit preservation ----
  for (int a = 0; a <= L; ++a) {
    const int32_t idp = identity_index(s, a);
    for (int32_t x = 0; x < G.order(a); ++x) {
      if (G.restrict_el(a, a, idp, x) != x)
        out.violation("presheaf-id", "id* != id at " + el(a, x));
      if (G.act_on(a, a, x, idp) != idp)
        out.violation("action-id", "id^x != id at " + el(a, x));  // Lemma 1(1)
    }
    for (int b = 0; b <= L; ++b) {
      const int H = homs(s, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        if (G.restrict_el(a, b, p, G.lvl[a].unit) != G.lvl[b].unit)
          out.violation("unit-restrict", "phi*(e) != e, phi#" + std::to_string(p) + " : " +
                                             std::to_string(b) + "->" + std::to_string(a));
    }
    out.count(2ull * G.order(a) + G.hom_total(a));
  }

  // ---- action rows are bijections; phi^e = phi; mono/epi preservation ----
  for (int a = 0; a <= L; ++a) {
    const int totH = G.hom_total(a);
    for (int b = 0; b <= L; ++b) {
      const HomSet& H = homs(s, b, a);
      std::vector<uint8_t> mono(H.size()), epi(H.size());
      for (int p = 0; p < H.size(); ++p) {
        mono[p] = is_mono(H.list[p]);
        epi[p] = is_epi(H.list[p]);
      }
      std::vector<uint8_t> seen(H.size());
      for (int32_t x = 0; x < G.order(a); ++x) {
        const int32_t* row = G.act[a].data() + static_cast<size_t>(x) * totH + G.hoff[a][b];
        std::fill(seen.begin(), seen.end(), 0);
        for (int p = 0; p < H.size(); ++p) {
          int32_t q = row[p];
          if (q < 0 || q >= H.size() || seen[q]) {
            out.violation("action-bijection", el(a, x) + " on hom(" + std::to_string(b) + "," +
                                                  std::to_string(a) + ")");
            break;
          }
          seen[q] = 1;
          if (mono[p] && !mono[q])
            out.violation("mono-preserved", el(a, x) + " phi#" + std::to_string(p));
          if (epi[p] && !epi[q])
            out.violation("epi-preserved", el(a, x) + " phi#" + std::to_string(p));
        }
        if (x == G.lvl[a].unit)
          for (int p = 0; p < H.size(); ++p)
            if (row[p] != p) out.violation("action-unit", "phi^e != phi at level " + std::to_string(a));
      }
      out.count(static_cast<uint64_t>(G.order(a)) * H.size());
    }
  }
  if (out.any()) {
    out.flush();
    return rep;
  }

  // Column-major multiplication caches (transient; the big Weyl levels store
  // payloads, not dense tables).
  std::vector<std::vector<uint16_t>> colmuls(L + 1);
  for (int a = 0; a <= L; ++a) colmuls[a] = build_colmul(G.lvl[a], threads);

  // ---- left-action law: phi^{xy} = (phi^y)^x ----
  for (int a = 0; a <= L; ++a) {
    const LevelGroup& g = G.lvl[a];
    const int totH = G.hom_total(a);
    const auto& colmul = colmuls[a];
    parallel_for(g.order, threads, [&](int x) {
      uint64_t n = 0;
      const int32_t* ax = G.act[a].data() + static_cast<size_t>(x) * totH;
      for (int32_t y = 0; y < g.order; ++y) {
        const int32_t xy = colmul[static_cast<size_t>(y) * g.order + x];
        const int32_t* axy = G.act[a].data() + static_cast<size_t>(xy) * totH;
        const int32_t* ay = G.act[a].data() + static_cast<size_t>(y) * totH;
        for (int b = 0; b <= L; ++b) {
          const int32_t base = G.hoff[a][b];
          const int32_t hb = G.hoff[a][b + 1] - base;
          for (int32_t p = 0; p < hb; ++p) {
            if (axy[base + p] != ax[base + ay[base + p]]) {
              out.violation("action-law",
                            "phi^{xy} != (phi^y)^x at " + el(a, x) + "," + el(a, y) + " phi#" +
                                std::to_string(p) + " hom(" + std::to_string(b) + "," +
                                std::to_string(a) + ")");
              return;
            }
          }
          n += hb;
        }
      }
      out.count(n);
    });
    if (out.any()) break;
  }
  if (out.any()) {
    out.flush();
    return rep;
  }

  // ---- (CGii): phi*(x y) = (phi^y)*(x) phi*(y) ----
  for (int a = 0; a <= L; ++a) {
    const LevelGroup& g = G.lvl[a];
    const auto& colmul = colmuls[a];
    for (int b = 0; b <= L && !out.any(); ++b) {
      const int H = homs(s, b, a).size();
      const auto& colmulB = colmuls[b];
      const int orderB = G.lvl[b].order;
      parallel_for(H, threads, [&](int p) {
        const int32_t* r1 = G.rest[a].data() +
                            (static_cast<size_t>(G.hoff[a][b]) + p) * g.order;
        const int totH = G.hom_total(a);
        uint64_t n = 0;
        for (int32_t y = 0; y < g.order; ++y) {
          const int32_t py = G.act[a][static_cast<size_t>(y) * totH + G.hoff[a][b] + p];
          const int32_t* r2 = G.rest[a].data() +
                              (static_cast<size_t>(G.hoff[a][b]) + py) * g.order;
          const uint16_t* cy = colmul.data() + static_cast<size_t>(y) * g.order;
          const uint16_t* cb = colmulB.data() + static_cast<size_t>(r1[y]) * orderB;
          for (int32_t x = 0; x < g.order; ++x) {
            const int32_t lhs = r1[cy[x]];
            const int32_t rhs = cb[r2[x]];
            if (lhs != rhs) {
              out.violation("CGii", "phi#" + std::to_string(p) + ":" + std::to_string(b) + "->" +
                                        std::to_string(a) + " x=" + std::to_string(x) +
                                        " y=" + std::to_string(y));
              return;
            }
          }
          n += g.order;
        }
        out.count(n);
      });
    }
    if (out.any()) break;
  }
  if (out.any()) {
    out.flush();
    return rep;
  }
  colmuls.clear();
  colmuls.shrink_to_fit();

  // ---- presheaf composition law and (CGi) ----
  for (int c = 0; c <= L; ++c) {
    const LevelGroup& gc = G.lvl[c];
    for (int b = 0; b <= L; ++b) {
      const HomSet& Hbc = homs(s, b, c);
      if (Hbc.size() == 0) continue;
      for (int aa = 0; aa <= L; ++aa) {
        const HomSet& Hab = homs(s, aa, b);
        if (Hab.size() == 0) continue;
        const auto& cmp = comp_table(s, aa, b, c);
        parallel_for(gc.order, threads, [&](int x) {
          uint64_t n = 0;
          const int32_t* actx = G.act[c].data() + static_cast<size_t>(x) * G.hom_total(c);
          for (int32_t ps = 0; ps < Hbc.size(); ++ps) {
            const int32_t y2 = G.restrict_el(c, b, ps, x);   // psi*(x)
            const int32_t psx = actx[G.hoff[c][b] + ps];     // psi^x
            const int32_t* acty2 = G.act[b].data() + static_cast<size_t>(y2) * G.hom_total(b);
            for (int32_t ph = 0; ph < Hab.size(); ++ph) {
              const int32_t comp_idx = cmp[static_cast<size_t>(ps) * Hab.size() + ph];
              // presheaf: (psi phi)*(x) == phi*(psi*(x))
              const int32_t lhsr = G.restrict_el(c, aa, comp_idx, x);
              const int32_t rhsr = G.restrict_el(b, aa, ph, y2);
              if (lhsr != rhsr) {
                out.violation("presheaf-comp",
                              "psi#" + std::to_string(ps) + " phi#" + std::to_string(ph) + " x=" +
                                  std::to_string(x) + " levels " + std::to_string(aa) + "," +
                                  std::to_string(b) + "," + std::to_string(c));
                return;
              }
              // CGi: (psi phi)^x == psi^x ∘ phi^{psi*(x)}
              const int32_t lhsa = actx[G.hoff[c][aa] + comp_idx];
              const int32_t phy2 = acty2[G.hoff[b][aa] + ph];
              const int32_t rhsa = cmp[static_cast<size_t>(psx) * Hab.size() + phy2];
              if (lhsa != rhsa) {
                out.violation("CGi", "psi#" + std::to_string(ps) + " phi#" + std::to_string(ph) +
                                         " x=" + std::to_string(x) + " levels " +
                                         std::to_string(aa) + "," + std::to_string(b) + "," +
                                         std::to_string(c));
                return;
              }
            }
            n += 2ull * Hab.size();
          }
          out.count(n);
        });
        if (out.any()) break;
      }
      if (out.any()) break;
    }
    if (out.any()) break;
  }

  out.flush();
  return rep;
}
}  // namespace

bool is_non_crossed(const CrossedGroupTable& G) {
  for (int a = 0; a <= G.max_level; ++a) {
    const int totH = G.hom_total(a);
    for (int32_t x = 0; x < G.order(a); ++x) {
      const int32_t* row = G.act[a].data() + static_cast<size_t>(x) * totH;
      for (int b = 0; b <= G.max_level; ++b) {
        const int32_t base = G.hoff[a][b];
        const int32_t hb = G.hoff[a][b + 1] - base;
        for (int32_t p = 0; p < hb; ++p)
          if (row[base + p] != p) return false;
      }
    }
  }
  return true;
}

CrossedGroupMap identity_map(const CrossedGroupTable& G) {
  CrossedGroupMap m;
  m.src = m.dst = &G;
  m.f.resize(G.max_level + 1);
  for (int a = 0; a <= G.max_level; ++a) {
    m.f[a].resize(G.order(a));
    for (int32_t x = 0; x < G.order(a); ++x) m.f[a][x] = x;
  }
  return m;
}

VerifyReport verify_map(const CrossedGroupMap& m) {
  VerifyReport rep;
  const CrossedGroupTable& G = *m.src;
  const CrossedGroupTable& K = *m.dst;
  if (G.site != K.site || G.max_level != K.max_level) {
    rep.add("map", "site/truncation mismatch");
    return rep;
  }
  for (int a = 0; a <= G.max_level; ++a) {
    if (static_cast<int>(m.f[a].size()) != G.order(a)) {
      rep.add("map", "missing level " + std::to_string(a));
      return rep;
    }
    // degreewise homomorphism
    if (m.f[a][G.lvl[a].unit] != K.lvl[a].unit) rep.add("map-unit", "level " + std::to_string(a));
    for (int32_t x = 0; x < G.order(a); ++x)
      for (int32_t y = 0; y < G.order(a); ++y) {
        rep.checks++;
        if (m.f[a][G.lvl[a].mulxy(x, y)] != K.lvl[a].mulxy(m.f[a][x], m.f[a][y])) {
          rep.add("map-hom", el(a, x) + "," + el(a, y));
          return rep;
        }
      }
    // naturality and action compatibility
    for (int b = 0; b <= G.max_level; ++b) {
      const int H = homs(G.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t x = 0; x < G.order(a); ++x) {
          rep.checks += 2;
          if (m.f[b][G.restrict_el(a, b, p, x)] != K.restrict_el(a, b, p, m.f[a][x])) {
            rep.add("map-natural", "phi#" + std::to_string(p) + " " + el(a, x));
            return rep;
          }
          if (G.act_on(a, b, x, p) != K.act_on(a, b, m.f[a][x], p)) {
            rep.add("map-action", "phi#" + std::to_string(p) + " " + el(a, x));
            return rep;
          }
        }
    }
  }
  return rep;
}

bool tables_equal(const CrossedGroupTable& A, const CrossedGroupTable& B,
                  const std::vector<std::vector<int32_t>>& elem_map, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (A.site != B.site || A.max_level != B.max_level) return fail("site/truncation");
  for (int a = 0; a <= A.max_level; ++a) {
    if (A.order(a) != B.order(a)) return fail("order at level " + std::to_string(a));
    auto img = [&](int lvl, int32_t x) {
      return elem_map.empty() ? x : elem_map[lvl][x];
    };
    if (img(a, A.lvl[a].unit) != B.lvl[a].unit) return fail("unit at level " + std::to_string(a));
    for (int32_t x = 0; x < A.order(a); ++x)
      for (int32_t y = 0; y < A.order(a); ++y)
        if (img(a, A.lvl[a].mulxy(x, y)) != B.lvl[a].mulxy(img(a, x), img(a, y)))
          return fail("mul at level " + std::to_string(a));
    for (int b = 0; b <= A.max_level; ++b) {
      const int H = homs(A.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t x = 0; x < A.order(a); ++x) {
          if (img(b, A.restrict_el(a, b, p, x)) != B.restrict_el(a, b, p, img(a, x)))
            return fail("restriction at (" + std::to_string(a) + "," + std::to_string(b) + ")");
          if (A.act_on(a, b, x, p) != B.act_on(a, b, img(a, x), p))
            return fail("action at (" + std::to_string(a) + "," + std::to_string(b) + ")");
        }
    }
  }
  return true;
}

CrossedGroupTable trivial_table(Site s, int max_level) {
  CrossedGroupTable G;
  G.site = s;
  G.max_level = max_level;
  G.init_offsets();
  for (int a = 0; a <= max_level; ++a) {
    G.lvl[a].order = 1;
    G.lvl[a].unit = 0;
    G.lvl[a].mul = {0};
    G.lvl[a].inv = {0};
    G.rest[a].assign(G.hom_total(a), 0);
    G.act[a].resize(G.hom_total(a));
    for (int b = 0; b <= max_level; ++b) {
      const int H = homs(s, b, a).size();
      for (int32_t p = 0; p < H; ++p) G.act[a][G.hoff[a][b] + p] = p;
    }
  }
  return G;
}

}  // namespace crs
