#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace crs {

// The three finite sites.  Level objects:
//   Delta    [n]  = {0,...,n}
//   AugDelta <n>  = {1,...,n}          (empty for n = 0)
//   Nabla    <<n>> = {-oo,1,...,n,oo}
enum class Site : uint8_t { Delta, AugDelta, Nabla };

std::string site_name(Site s);
std::optional<Site> site_from_name(const std::string& name);

// Carrier points.  -oo and +oo are sentinels below/above every integer.
using Pt = int32_t;
inline constexpr Pt kNegInf = std::numeric_limits<Pt>::min();
inline constexpr Pt kPosInf = std::numeric_limits<Pt>::max();

inline bool has_endpoints(Site s) { return s == Site::Nabla; }
int carrier_size(Site s, int n);
int interior_size(Site s, int n);
std::vector<Pt> carrier(Site s, int n);
// Position of a point in the carrier order, and back.
int pt_pos(Site s, int n, Pt p);
Pt pos_pt(Site s, int n, int pos);
std::string pt_name(Pt p);

// An order-preserving map between level objects, endpoint-preserving for
// Nabla.  Only interior values are stored; endpoints map to endpoints.
struct SiteMorphism {
  Site site = Site::AugDelta;
  int dom = 0;
  int cod = 0;
  std::vector<Pt> values;  // weakly increasing, one per interior domain point

  bool operator==(const SiteMorphism&) const = default;
  bool operator<(const SiteMorphism& o) const;

  // Full carrier map as positions: size carrier_size(dom), entries are
  // positions in carrier(cod).
  std::vector<int32_t> pos_map() const;
  std::string str() const;
};

SiteMorphism identity_mor(Site s, int n);
bool is_identity(const SiteMorphism& f);
bool is_valid(const SiteMorphism& f);

// psi after phi; levels and site must match.
SiteMorphism compose(const SiteMorphism& psi, const SiteMorphism& phi);

// Preimage of a codomain carrier point, in increasing order (full carrier,
// endpoints included for Nabla).
std::vector<Pt> fiber(const SiteMorphism& phi, Pt target);

bool is_mono(const SiteMorphism& f);   // injective on the carrier
bool is_epi(const SiteMorphism& f);    // surjective on the carrier

// Exhaustive, duplicate-free, lexicographic in `values`.
std::vector<SiteMorphism> hom_set(Site s, int m, int n);

// Interned hom-set with precomputed position maps.
struct HomSet {
  Site site;
  int m, n;
  std::vector<SiteMorphism> list;            // lex order
  std::vector<std::vector<int32_t>> pos;     // pos_map per morphism
  int size() const { return static_cast<int>(list.size()); }
  int index_of(const SiteMorphism& f) const;  // -1 if absent
};

const HomSet& homs(Site s, int m, int n);

// comp_table(s,a,b,c)[psi * |hom(a,b)| + phi] = index of psi∘phi in hom(a,c)
// for psi in hom(b,c), phi in hom(a,b).
const std::vector<int32_t>& comp_table(Site s, int a, int b, int c);
int identity_index(Site s, int n);

// The internally well-co-ordered generator s and the co-relation s ⇉ s̄.
int s_level(Site s);
int sbar_level(Site s);
// iota0/iota1 as indices in homs(s_level, sbar_level); which in {0,1}.
int iota_index(Site s, int which);
// hom(s, n) is canonically the carrier of level n; these convert between a
// hom-set index and the carrier position of the evaluation point.
int s_hom_to_pos(Site s, int n, int hom_index);
int pos_to_s_hom(Site s, int n, int pos);
// refl(alpha): the unique map sbar -> n with refl∘iota0 = refl∘iota1 = alpha,
// alpha given by its carrier position.  Returns an index in homs(sbar, n).
int refl_index(Site s, int n, int alpha_pos);

// --- interval category ---

// Membership in the class I of Nabla morphisms restricting to a bijection
// phi^{-1}{1..n} -> {1..n}.
bool in_interval_class(const SiteMorphism& phi);

struct IntervalFactorization {
  SiteMorphism mu;   // AugDelta morphism <k> -> <n>
  SiteMorphism rho;  // Nabla morphism in I, dom(phi) -> <<k>>
};

// Unique factorization phi = J(mu) ∘ rho with rho in I.
IntervalFactorization interval_factor(const SiteMorphism& phi);

// The image of an AugDelta morphism under J : AugDelta -> Nabla.
SiteMorphism apply_J(const SiteMorphism& mu);

}  // namespace crs
