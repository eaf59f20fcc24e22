#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crs/perm.hpp"
#include "crs/site.hpp"

namespace crs {

// Dense multiplication tables are kept up to this order; larger levels use a
// permutation-with-signs representation.
inline constexpr int kDenseMulCap = 4096;

// Element of a Weyl-type level: a permutation of hom(s, a) (= the carrier)
// together with a sign vector, bit i set meaning -1 at carrier position i.
struct WeylElem {
  Perm perm;
  uint32_t signs = 0;
  bool operator==(const WeylElem&) const = default;
};

struct LevelGroup {
  int32_t order = 1;
  int32_t unit = 0;
  std::vector<int32_t> mul;  // [x*order+y] = x*y; empty for payload levels
  std::vector<int32_t> inv;
  std::vector<WeylElem> elems;    // optional payloads
  std::vector<int32_t> lookup;    // (lehmer*2^carrier + signs) -> index
  int carrier = 0;

  bool payload_based() const { return mul.empty(); }
  int32_t mulxy(int32_t x, int32_t y) const;
  int32_t invx(int32_t x) const { return inv[x]; }
  int32_t index_of(const Perm& p, uint32_t signs) const;
  void build_lookup();  // from elems
  void build_dense_from_payload();
};

WeylElem weyl_mul(const WeylElem& a, const WeylElem& b);
WeylElem weyl_inv(const WeylElem& a);

// A degree-truncated crossed group.  Restriction and action data is stored
// for every morphism between levels 0..max_level.
//
//   restriction: phi: b -> a, x in G(a)  |->  phi*(x) in G(b)
//   action:      x in G(a), phi in hom(b,a)  |->  phi^x in hom(b,a)
//
// Hom-sets over all b are concatenated per level a; hoff[a][b] is the offset
// of homs(b, a) and hoff[a][max_level+1] the total count.
struct CrossedGroupTable {
  Site site = Site::AugDelta;
  int max_level = 0;
  std::vector<LevelGroup> lvl;
  std::vector<std::vector<int32_t>> hoff;
  std::vector<std::vector<int32_t>> rest;  // rest[a][(hoff[a][b]+phi)*order(a) + x]
  std::vector<std::vector<int32_t>> act;   // act[a][x*hoff[a][L+1] + hoff[a][b]+phi]

  int order(int a) const { return lvl[a].order; }
  int hom_total(int a) const { return hoff[a][max_level + 1]; }
  int32_t restrict_el(int a, int b, int32_t phi, int32_t x) const {
    return rest[a][(static_cast<size_t>(hoff[a][b]) + phi) * order(a) + x];
  }
  int32_t act_on(int a, int b, int32_t x, int32_t phi) const {
    return act[a][static_cast<size_t>(x) * hom_total(a) + hoff[a][b] + phi];
  }
  void init_offsets();  // fills hoff from site/max_level and sizes rest/act
};

// Morphism of the total category A_G: a pair (phi, x) with phi: dom -> cod
// and x in G(dom).
struct TotalMor {
  int dom = 0, cod = 0;
  int32_t phi = 0;
  int32_t x = 0;
  bool operator==(const TotalMor&) const = default;
};

TotalMor total_identity(const CrossedGroupTable& G, int a);
// (psi, y) ∘ (phi, x) = (psi ∘ phi^y, phi*(y)·x)
TotalMor total_compose(const CrossedGroupTable& G, const TotalMor& psi_y,
                       const TotalMor& phi_x);

struct AxiomViolation {
  std::string kind;
  std::string detail;
};

struct VerifyReport {
  bool ok = true;
  uint64_t checks = 0;
  std::vector<AxiomViolation> violations;
  void add(const std::string& kind, const std::string& detail);
  std::string summary() const;
};

struct VerifyOptions {
  int threads = 0;          // 0 = hardware
  int max_violations = 16;  // reporting cap; counting continues
  bool deep_group_check = true;  // associativity for small dense levels
};

// Exhaustive check of (CGi), (CGii), presheaf laws, action laws, and the
// derived facts: identity fixed by the action, units preserved by
// restriction, monos/split epis preserved.
VerifyReport verify_crossed_axioms(const CrossedGroupTable& G,
                                   const VerifyOptions& opts = {});

// True iff every action entry is the identity morphism.
bool is_non_crossed(const CrossedGroupTable& G);

struct CrossedGroupMap {
  const CrossedGroupTable* src = nullptr;
  const CrossedGroupTable* dst = nullptr;
  std::vector<std::vector<int32_t>> f;  // per level
};

CrossedGroupMap identity_map(const CrossedGroupTable& G);
// Checks: degreewise homomorphism, A-set naturality, action compatibility.
VerifyReport verify_map(const CrossedGroupMap& m);

// Structural equality of two tables over the same site and truncation, up to
// the given per-level element bijection (identity when empty).
bool tables_equal(const CrossedGroupTable& A, const CrossedGroupTable& B,
                  const std::vector<std::vector<int32_t>>& elem_map = {},
                  std::string* why = nullptr);

// The initial object: trivial groups, trivial actions.
CrossedGroupTable trivial_table(Site s, int max_level);

}  // namespace crs
