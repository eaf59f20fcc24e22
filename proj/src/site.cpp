#include "crs/site.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace crs {

std::string site_name(Site s) {
  switch (s) {
    case Site::Delta: return "delta";
    case Site::AugDelta: return "aug-delta";
    case Site::Nabla: return "nabla";
  }
  return "?";
}

std::optional<Site> site_from_name(const std::string& name) {
  if (name == "delta") return Site::Delta;
  if (name == "aug-delta" || name == "augdelta") return Site::AugDelta;
  if (name == "nabla") return Site::Nabla;
  return std::nullopt;
}

int carrier_size(Site s, int n) {
  switch (s) {
    case Site::Delta: return n + 1;
    case Site::AugDelta: return n;
    case Site::Nabla: return n + 2;
  }
  return 0;
}

int interior_size(Site s, int n) {
  return s == Site::Nabla ? n : carrier_size(s, n);
}

std::vector<Pt> carrier(Site s, int n) {
  std::vector<Pt> out;
  out.reserve(carrier_size(s, n));
  if (s == Site::Nabla) out.push_back(kNegInf);
  const Pt first = (s == Site::Delta) ? 0 : 1;
  const Pt last = (s == Site::Delta) ? n : n;
  for (Pt p = first; p <= last; ++p) out.push_back(p);
  if (s == Site::Nabla) out.push_back(kPosInf);
  return out;
}

int pt_pos(Site s, int n, Pt p) {
  switch (s) {
    case Site::Delta:
      if (p < 0 || p > n) throw std::out_of_range("pt_pos: delta point");
      return p;
    case Site::AugDelta:
      if (p < 1 || p > n) throw std::out_of_range("pt_pos: aug-delta point");
      return p - 1;
    case Site::Nabla:
      if (p == kNegInf) return 0;
      if (p == kPosInf) return n + 1;
      if (p < 1 || p > n) throw std::out_of_range("pt_pos: nabla point");
      return p;
  }
  return -1;
}

Pt pos_pt(Site s, int n, int pos) {
  if (pos < 0 || pos >= carrier_size(s, n)) throw std::out_of_range("pos_pt");
  switch (s) {
    case Site::Delta: return pos;
    case Site::AugDelta: return pos + 1;
    case Site::Nabla:
      if (pos == 0) return kNegInf;
      if (pos == n + 1) return kPosInf;
      return pos;
  }
  return 0;
}

std::string pt_name(Pt p) {
  if (p == kNegInf) return "-inf";
  if (p == kPosInf) return "inf";
  return std::to_string(p);
}

bool SiteMorphism::operator<(const SiteMorphism& o) const {
  return std::tie(site, dom, cod, values) < std::tie(o.site, o.dom, o.cod, o.values);
}

std::vector<int32_t> SiteMorphism::pos_map() const {
  std::vector<int32_t> out(carrier_size(site, dom));
  int i = 0;
  if (site == Site::Nabla) out[i++] = 0;
  for (Pt v : values) out[i++] = pt_pos(site, cod, v);
  if (site == Site::Nabla) out[i++] = carrier_size(site, cod) - 1;
  return out;
}

std::string SiteMorphism::str() const {
  std::ostringstream os;
  os << site_name(site) << ":" << dom << "->" << cod << "(";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) os << ",";
    os << pt_name(values[i]);
  }
  os << ")";
  return os.str();
}

SiteMorphism identity_mor(Site s, int n) {
  SiteMorphism f;
  f.site = s;
  f.dom = f.cod = n;
  const Pt first = (s == Site::Delta) ? 0 : 1;
  for (int i = 0; i < interior_size(s, n); ++i) f.values.push_back(first + i);
  return f;
}

bool is_identity(const SiteMorphism& f) {
  return f.dom == f.cod && f == identity_mor(f.site, f.dom);
}

bool is_valid(const SiteMorphism& f) {
  if (f.dom < 0 || f.cod < 0) return false;
  if (static_cast<int>(f.values.size()) != interior_size(f.site, f.dom)) return false;
  Pt prev = kNegInf;
  for (Pt v : f.values) {
    if (f.site != Site::Nabla) {
      const Pt lo = (f.site == Site::Delta) ? 0 : 1;
      const Pt hi = (f.site == Site::Delta) ? f.cod : f.cod;
      if (v < lo || v > hi) return false;
    } else {
      if (v != kNegInf && v != kPosInf && (v < 1 || v > f.cod)) return false;
    }
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

SiteMorphism compose(const SiteMorphism& psi, const SiteMorphism& phi) {
  if (psi.site != phi.site || phi.cod != psi.dom)
    throw std::invalid_argument("compose: level/site mismatch");
  SiteMorphism out;
  out.site = phi.site;
  out.dom = phi.dom;
  out.cod = psi.cod;
  out.values.reserve(phi.values.size());
  for (Pt v : phi.values) {
    if (v == kNegInf || v == kPosInf)
      out.values.push_back(v);
    else if (phi.site == Site::Delta)
      out.values.push_back(psi.values[v]);
    else
      out.values.push_back(psi.values[v - 1]);  // interior points are 1-based
  }
  return out;
}

std::vector<Pt> fiber(const SiteMorphism& phi, Pt target) {
  const int tpos = pt_pos(phi.site, phi.cod, target);  // validates the point
  (void)tpos;
  std::vector<Pt> out;
  const auto car = carrier(phi.site, phi.dom);
  const auto pm = phi.pos_map();
  for (size_t i = 0; i < car.size(); ++i)
    if (pm[i] == pt_pos(phi.site, phi.cod, target)) out.push_back(car[i]);
  return out;
}

bool is_mono(const SiteMorphism& f) {
  const auto pm = f.pos_map();
  for (size_t i = 1; i < pm.size(); ++i)
    if (pm[i] == pm[i - 1]) return false;
  return true;
}

bool is_epi(const SiteMorphism& f) {
  const auto pm = f.pos_map();
  std::vector<bool> hit(carrier_size(f.site, f.cod), false);
  for (auto p : pm) hit[p] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

std::vector<SiteMorphism> hom_set(Site s, int m, int n) {
  std::vector<SiteMorphism> out;
  const int k = interior_size(s, m);
  const auto cod_car = carrier(s, n);
  if (s == Site::AugDelta && n == 0 && m > 0) return out;  // no maps into the empty set
  SiteMorphism f;
  f.site = s;
  f.dom = m;
  f.cod = n;
  f.values.assign(k, 0);
  // enumerate weakly increasing sequences over cod_car, lexicographically
  std::vector<int> idx(k, 0);
  while (true) {
    for (int i = 0; i < k; ++i) f.values[i] = cod_car[idx[i]];
    out.push_back(f);
    int i = k - 1;
    while (i >= 0 && idx[i] == static_cast<int>(cod_car.size()) - 1) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[i];
  }
  if (k == 0) {
    out.clear();
    out.push_back(f);  // the unique map with empty interior
  }
  return out;
}

namespace {

struct HomKey {
  Site s;
  int m, n;
  bool operator<(const HomKey& o) const {
    return std::tie(s, m, n) < std::tie(o.s, o.m, o.n);
  }
};

std::map<HomKey, HomSet>& hom_cache() {
  static std::map<HomKey, HomSet> cache;
  return cache;
}
std::mutex& hom_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

const HomSet& homs(Site s, int m, int n) {
  std::lock_guard<std::mutex> lk(hom_mutex());
  HomKey key{s, m, n};
  auto it = hom_cache().find(key);
  if (it != hom_cache().end()) return it->second;
  HomSet hs;
  hs.site = s;
  hs.m = m;
  hs.n = n;
  hs.list = hom_set(s, m, n);
  hs.pos.reserve(hs.list.size());
  for (const auto& f : hs.list) hs.pos.push_back(f.pos_map());
  return hom_cache().emplace(key, std::move(hs)).first->second;
}

int HomSet::index_of(const SiteMorphism& f) const {
  auto it = std::lower_bound(list.begin(), list.end(), f,
                             [](const SiteMorphism& a, const SiteMorphism& b) {
                               return a.values < b.values;
                             });
  if (it == list.end() || !(*it == f)) return -1;
  return static_cast<int>(it - list.begin());
}

namespace {

struct CompKey {
  Site s;
  int a, b, c;
  bool operator<(const CompKey& o) const {
    return std::tie(s, a, b, c) < std::tie(o.s, o.a, o.b, o.c);
  }
};

std::map<CompKey, std::vector<int32_t>>& comp_cache() {
  static std::map<CompKey, std::vector<int32_t>> cache;
  return cache;
}
std::mutex& comp_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

const std::vector<int32_t>& comp_table(Site s, int a, int b, int c) {
  const HomSet& ab = homs(s, a, b);
  const HomSet& bc = homs(s, b, c);
  const HomSet& ac = homs(s, a, c);
  std::lock_guard<std::mutex> lk(comp_mutex());
  CompKey key{s, a, b, c};
  auto it = comp_cache().find(key);
  if (it != comp_cache().end()) return it->second;
  std::vector<int32_t> tbl(static_cast<size_t>(ab.size()) * bc.size());
  for (int p = 0; p < bc.size(); ++p)
    for (int q = 0; q < ab.size(); ++q) {
      int idx = ac.index_of(compose(bc.list[p], ab.list[q]));
      assert(idx >= 0);
      tbl[static_cast<size_t>(p) * ab.size() + q] = idx;
    }
  return comp_cache().emplace(key, std::move(tbl)).first->second;
}

int identity_index(Site s, int n) {
  int idx = homs(s, n, n).index_of(identity_mor(s, n));
  assert(idx >= 0);
  return idx;
}

int s_level(Site s) { return s == Site::Delta ? 0 : 1; }
int sbar_level(Site s) { return s == Site::Delta ? 1 : 2; }

int iota_index(Site s, int which) {
  SiteMorphism f;
  f.site = s;
  f.dom = s_level(s);
  f.cod = sbar_level(s);
  const Pt first = (s == Site::Delta) ? 0 : 1;
  f.values = {first + which};
  int idx = homs(s, f.dom, f.cod).index_of(f);
  assert(idx >= 0);
  return idx;
}

int s_hom_to_pos(Site s, int n, int hom_index) {
  // hom(s, n) is enumerated lexicographically in the single interior value,
  // which runs through the carrier in order.
  (void)s;
  (void)n;
  return hom_index;
}

int pos_to_s_hom(Site s, int n, int pos) {
  (void)s;
  (void)n;
  return pos;
}

int refl_index(Site s, int n, int alpha_pos) {
  SiteMorphism f;
  f.site = s;
  f.dom = sbar_level(s);
  f.cod = n;
  const Pt v = pos_pt(s, n, alpha_pos);
  f.values = {v, v};
  int idx = homs(s, f.dom, f.cod).index_of(f);
  assert(idx >= 0);
  return idx;
}

bool in_interval_class(const SiteMorphism& phi) {
  if (phi.site != Site::Nabla) return false;
  std::vector<int> hits(phi.cod + 1, 0);
  for (Pt v : phi.values)
    if (v != kNegInf && v != kPosInf) hits[v]++;
  for (int j = 1; j <= phi.cod; ++j)
    if (hits[j] != 1) return false;
  return true;
}

IntervalFactorization interval_factor(const SiteMorphism& phi) {
  if (phi.site != Site::Nabla) throw std::invalid_argument("interval_factor: nabla only");
  // Interior points mapping to the interior form a contiguous run; collapse
  // the -oo prefix and oo suffix.
  IntervalFactorization out;
  std::vector<Pt> mid;
  int prefix = 0, suffix = 0;
  bool in_mid = false;
  for (Pt v : phi.values) {
    if (v == kNegInf) {
      prefix++;
      assert(!in_mid);
    } else if (v == kPosInf) {
      suffix++;
    } else {
      in_mid = true;
      assert(suffix == 0);
      mid.push_back(v);
    }
  }
  const int k = static_cast<int>(mid.size());
  out.rho.site = Site::Nabla;
  out.rho.dom = phi.dom;
  out.rho.cod = k;
  for (int i = 0; i < prefix; ++i) out.rho.values.push_back(kNegInf);
  for (int i = 0; i < k; ++i) out.rho.values.push_back(i + 1);
  for (int i = 0; i < suffix; ++i) out.rho.values.push_back(kPosInf);
  out.mu.site = Site::AugDelta;
  out.mu.dom = k;
  out.mu.cod = phi.cod;
  out.mu.values = mid;
  return out;
}

SiteMorphism apply_J(const SiteMorphism& mu) {
  if (mu.site != Site::AugDelta) throw std::invalid_argument("apply_J: aug-delta only");
  SiteMorphism out;
  out.site = Site::Nabla;
  out.dom = mu.dom;
  out.cod = mu.cod;
  out.values = mu.values;
  return out;
}

}  // namespace crs
