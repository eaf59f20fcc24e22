#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crs/group_table.hpp"
#include "crs/monoidal.hpp"
#include "crs/site.hpp"

namespace crs {

// A faithful functor between two of the three sites.
struct SiteFunctor {
  std::string name;
  Site src, dst;
  std::function<int(int)> obj;
  std::function<SiteMorphism(const SiteMorphism&)> map_mor;
  // Unique preimage on the image (faithfulness); nullopt when outside.
  std::function<std::optional<SiteMorphism>(const SiteMorphism&)> preimage;
};

const SiteFunctor& functor_j();  // Delta -> AugDelta, [k] |-> <k+1>
const SiteFunctor& functor_J();  // AugDelta -> Nabla, <n> |-> <<n>>
const SiteFunctor& functor_U();  // Nabla -> AugDelta, <<n>> |-> <n+2>

struct StabilityResult {
  bool stable = true;
  std::string witness;
};

// Whether the image of each hom-map is closed under the Gt-action at the
// given source truncation.
StabilityResult is_stable(const SiteFunctor& F, const CrossedGroupTable& Gt, int src_max_level);

// F*Gt: the restricted crossed group on the source site.  Element indices of
// level a coincide with Gt's indices at level F(a).
CrossedGroupTable restrict_crossed(const SiteFunctor& F, const CrossedGroupTable& Gt,
                                   int src_max_level);

// Pullback of a monoid table along F; the base must be restrict_crossed(F, base of M).
MonoidTable pullback_monoid(const SiteFunctor& F, const MonoidTable& M,
                            const CrossedGroupTable& restricted_base, int src_max_level);

// --- right Kan extension along j ---

// j_* on plain presheaves: level 0 a point, level n the (n-1)-simplices.
PresheafTable ran_j(const PresheafTable& X);
// j_* of a crossed group on Delta (e.g. W_Delta |-> W_AugDelta).
CrossedGroupTable ran_j_crossed(const CrossedGroupTable& X);
// j_# of a crossed monoid over Gt on Delta; base_out = the AugDelta base with
// base_out restricted back to Gt's site... see ran_j_crossed for the group case.
MonoidTable ran_j_monoid(const MonoidTable& M, const CrossedGroupTable& aug_base);

// --- right Kan extension along J (the interval case) ---

// The counit comparison map tau_n : <<n+2>> -> <<n>>.
SiteMorphism tau_n(int n);

struct RanInterval {
  MonoidTable monoid;                          // on Nabla over W_Nabla
  std::vector<std::vector<int32_t>> element_of;  // level n -> indices into M(<n+2>)
};

// J_# M for M over J*W_Nabla: the subset of M(<n+2>) cut out by the endpoint
// conditions, with the Nabla structure induced along U.
RanInterval ran_interval_monoid(const MonoidTable& M, const std::vector<std::vector<uint8_t>>& theta,
                                const CrossedGroupTable& W_nabla);

// theta from the structure map (the endpoint-swap part of the payload).
std::vector<std::vector<uint8_t>> theta_from_structure(const MonoidTable& M);

// --- left Kan extension along J on plain presheaves ---

struct LanInterval {
  PresheafTable table;  // on Nabla
  // pair (k, x, rho) per level-n element
  struct Pair {
    int k;
    int32_t x;
    int32_t rho;  // index in homs(Nabla, n, k)
  };
  std::vector<std::vector<Pair>> pairs;
};

LanInterval lan_interval(const PresheafTable& X, int cap);

// --- the left adjoint presentation (Theorem-style word object) ---

struct LanLetter {
  int b = 0;        // source level, x in M(b)
  int32_t x = 0;
  int32_t phi = 0;  // index in homs(dst, out_level, F.obj(b))
  auto operator<=>(const LanLetter&) const = default;
};

using LanWord = std::vector<LanLetter>;

// Word-based presentation of the left adjoint on crossed monoids for the two
// shipped functors.  Words are reduced to a canonical form by pulling letters
// back along functor-image factors, dropping units, and merging adjacent
// letters whose twists line up.
class LanCrossedMonoid {
 public:
  LanCrossedMonoid(const SiteFunctor& F, const MonoidTable& M, const CrossedGroupTable& Gt,
                   int out_max_level, int word_cap);

  LanWord reduce(int out_level, LanWord w) const;
  LanWord concat(int out_level, const LanWord& u, const LanWord& v) const;  // throws CapExceeded
  LanWord restrict_word(int from_level, int to_level, int32_t psi, const LanWord& w) const;
  int32_t structure(int out_level, const LanWord& w) const;  // in Gt(out_level)
  LanWord unit_word() const { return {}; }
  // The adjunction unit x |-> [x, id] at a source level (id at F(b)).
  LanWord unit_of(int b, int32_t x) const;

  // One-step relation neighbours of a word (for the empirical confluence
  // assertion); each neighbour reduces to the same normal form or the check
  // fails.
  bool check_confluence(int out_level, const LanWord& w, std::string* why = nullptr) const;

  const MonoidTable& source() const { return *M_; }
  const CrossedGroupTable& base() const { return *Gt_; }
  int word_cap() const { return cap_; }
  // pi0 classes (j only): representative in M([0]) for any element.
  int32_t component_rep(int b, int32_t x) const;

 private:
  LanLetter canon_letter(int out_level, LanLetter l) const;
  const SiteFunctor* F_;
  const MonoidTable* M_;
  const CrossedGroupTable* Gt_;
  int out_L_, cap_;
  // union-find over coproduct of M(b) for the j case
  std::vector<std::vector<int32_t>> comp_rep_;
};

// --- pi0 of a crossed simplicial monoid ---

struct Pi0Monoid {
  int32_t size = 0;
  std::vector<int32_t> class_of;   // M([0]) -> class
  std::vector<int32_t> rep_of;     // class -> minimal representative in M([0])
  std::vector<int32_t> mul;        // dense
  bool well_defined = true;        // representative independence
  std::string failure;
};

Pi0Monoid pi0_monoid(const MonoidTable& M);

}  // namespace crs
