#pragma once

#include <cstdint>
#include <vector>

#include "crs/group_table.hpp"
#include "crs/perm.hpp"
#include "crs/site.hpp"

namespace crs {

// --- permutation action on hom-sets (join decomposition) ---

// Fiber sizes of phi^sigma: t[j] = |phi^{-1}{sigma^{-1}(j)}|.
std::vector<int32_t> permuted_fiber_sizes(const std::vector<int32_t>& fiber_sizes,
                                          const Perm& sigma);

// Whether the order-preserving map with the given fiber sizes is a valid
// site morphism (for Nabla the endpoint fibers must be nonempty).
bool fiber_sizes_valid(Site s, const std::vector<int32_t>& sizes);

// phi^sigma: the unique order-preserving map whose fibers have the sizes of
// phi's fibers permuted by sigma.  sigma is a permutation of carrier(cod).
SiteMorphism sym_action(const SiteMorphism& phi, const Perm& sigma);

// tau = phi*(sigma)·beta_phi(eps): the permutation of carrier(dom) that is
// fiberwise order-preserving or -reversing according to the sign bits and
// covers sigma over phi.  signs bit i set means -1 at carrier position i.
Perm weyl_restrict_perm(const SiteMorphism& phi, const Perm& sigma, uint32_t signs);

// phi*(sigma) with all signs +1.
inline Perm sym_restrict(const SiteMorphism& phi, const Perm& sigma) {
  return weyl_restrict_perm(phi, sigma, 0);
}

// beta_phi alone (identity block permutation, fiberwise reversal by sign).
inline Perm beta_phi(const SiteMorphism& phi, uint32_t signs) {
  return weyl_restrict_perm(phi, perm_identity(carrier_size(phi.site, phi.cod)), signs);
}

// Sign pullback phi*(eps): bit at domain position d is the bit of eps at
// phi(d).  Uses the full carrier map, so endpoint signs transport as-is.
uint32_t pullback_signs(const SiteMorphism& phi, uint32_t signs);

// --- the stabilized permutation group S_A(a) ---

// Definition-based: sigma such that phi^sigma stays a site morphism for every
// phi in hom(b, a), b <= probe_cap.
std::vector<Perm> stabilized_perms_by_definition(Site s, int n, int probe_cap);
// Closed form: all permutations for Delta / AugDelta, endpoint-pair
// stabilizers for Nabla.  Enumerated in lexicographic order.
std::vector<Perm> stabilized_perms(Site s, int n);
bool perm_stabilized(Site s, int n, const Perm& sigma);

// --- cyclic restriction ---

// Restriction of the rotation by k along mu in AugDelta; the result is the
// rotation by |mu^{-1}{n-k+1..n}| of the domain.  Cross-checked against
// sym_restrict in the tests.
int cyc_restrict_shift(const SiteMorphism& mu, int k);
Perm rotation_perm(int n, int k);
bool is_rotation(const Perm& p, int* shift_out = nullptr);

// --- hyperoctahedral restriction (payload form) ---

// phi*(sigma; eps) = (phi*(sigma)·beta_phi(eps); phi*(eps)); works for all
// Weyl-type payloads on any of the three sites.
WeylElem hyp_restrict(const SiteMorphism& phi, const WeylElem& x);

// --- family builders ---

CrossedGroupTable sym_table(Site s, int max_level);
CrossedGroupTable cyc_table(int max_level);                 // AugDelta
CrossedGroupTable hyp_table(Site s, int max_level);         // AugDelta or Nabla
CrossedGroupTable weyl_table(Site s, int max_level, int probe_cap = -1);
CrossedGroupTable dihedral_table(int max_level);            // AugDelta

// Raw def-Weyl membership enumeration for one level (payloads only).
std::vector<WeylElem> weyl_level_elements(Site s, int n, int probe_cap);

// --- canonical map and terminality ---

// R~ = (R_a; eps_a): the unique crossed-group map G -> W.
CrossedGroupMap canonical_map(const CrossedGroupTable& G, const CrossedGroupTable& W);

struct TerminalityResult {
  bool unique = false;
  long long count = 0;  // number of crossed-group maps found
  CrossedGroupMap witness;
};

// Exhaustive search (complete backtracking with forced-propagation) for all
// crossed-group maps G -> W at the shared truncation.
TerminalityResult terminality_check(const CrossedGroupTable& G, const CrossedGroupTable& W);

// Abstract hyperoctahedral group H_n = S_n x C2^n with the wreath product
// multiplication; used as the closed-form oracle for Weyl orders.
struct WreathGroup {
  int n = 0;
  int64_t order() const { return static_cast<int64_t>(factorial(n)) << n; }
};

// Explicit multiplication-preserving bijection H_n -> W_AugDelta(<n>) or
// H_n x C2 -> W_Nabla(<<n>>); returns false if anything fails.
bool check_weyl_isomorphism(const CrossedGroupTable& W, int n, std::string* why = nullptr);

}  // namespace crs
