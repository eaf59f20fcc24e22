#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crs/group_table.hpp"
#include "crs/subgroup.hpp"

namespace crs {

struct VirtualProductResult {
  bool ok = true;
  std::string witness;
};

// G a virtual product of the subgroup families F1, F2: levelwise generation,
// trivial intersection, trivial commutators, plus the derived restriction
// identity (phi^{x2})*(x1) = phi*(x1).
VirtualProductResult is_virtual_product(const CrossedGroupTable& G, const SubgroupFamily& F1,
                                        const SubgroupFamily& F2);

// A quintuple (H~1, H1; H~2, H2; chi) over a virtual product.  chi maps
// cosets of H~1/H1 to cosets of H~2/H2 levelwise.
struct GoursatQuintuple {
  SubgroupFamily Ht1, H1, Ht2, H2;
  std::vector<std::vector<int32_t>> chi;  // per level, indexed by H~1/H1 coset id
};

// Cosets x·H1(a) of Ht1(a), identified by minimal representative; used to
// present chi concretely.
struct CosetSpace {
  std::vector<std::vector<int32_t>> coset_of;  // ambient index -> coset id (or -1)
  std::vector<std::vector<int32_t>> rep_of;
};
CosetSpace coset_space(const CrossedGroupTable& G, const SubgroupFamily& Ht,
                       const SubgroupFamily& H);

GoursatQuintuple goursat_forward(const CrossedGroupTable& G, const SubgroupFamily& G1,
                                 const SubgroupFamily& G2, const SubgroupFamily& H);

SubgroupFamily goursat_backward(const CrossedGroupTable& G, const SubgroupFamily& G1,
                                const SubgroupFamily& G2, const GoursatQuintuple& Q);

// All valid quintuples with components among the given subgroup families of
// G1 and G2 (chi is searched; for subquotients of C2 it is forced).
std::vector<GoursatQuintuple> enumerate_quintuples(const CrossedGroupTable& G,
                                                   const SubgroupFamily& G1,
                                                   const SubgroupFamily& G2,
                                                   const std::vector<SubgroupFamily>& subs1,
                                                   const std::vector<SubgroupFamily>& subs2);

// All families of levelwise subgroups closed under every restriction map.
// Complete: singleton-generated families are closed pairwise under joins.
// Guard: every level order must be <= guard.
std::vector<SubgroupFamily> enumerate_crossed_subgroups(const CrossedGroupTable& G,
                                                        int guard = 1000);

// --- reproduction of the classification tables ---

struct TableRow {
  std::string name;
  std::string symbol;
  std::vector<int64_t> expected_orders;  // per level 0..max_level (-1 = unconstrained)
  std::vector<int64_t> found_orders;
  bool matched = false;
  std::string quadruple;  // table 3 annotation
};

struct TableReport {
  int which = 0;
  int max_level = 0;
  std::vector<TableRow> rows;
  int families_found = 0;
  bool ok = false;
  std::string detail;
};

// which = 1: crossed simplicial subgroups of W_Delta (via the index shift),
// which = 2: augmented crossed simplicial subgroups of W_AugDelta,
// which = 3: crossed interval subgroups of W_Nabla with quadruple annotations.
TableReport reproduce_table(int which, int max_level);

// --- the appendix analysis over j*W_Nabla ---

struct QuadrupleReport {
  std::string label;           // e.g. "(S,S;C2,C2)"
  GoursatQuintuple quintuple;
  SubgroupFamily family;       // H^Q over JW
  bool nabla_closed = false;
  std::string witness;         // morphism/element leaving the family
};

struct IntervalGoursatAnalysis {
  CrossedGroupTable W_nabla;   // W on Nabla at the truncation
  CrossedGroupTable JW;        // J*W_Nabla on AugDelta
  SubgroupFamily hyp_part;     // the H_n factor
  SubgroupFamily c2_part;      // the global-flip factor
  std::vector<QuadrupleReport> quadruples;  // candidates (expected: 8)
  int closed_count = 0;                     // expected: 6
};

IntervalGoursatAnalysis analyze_interval_quadruples(int max_level);

// Name a subgroup family of a Weyl table by its orders at generic levels;
// returns empty when no row matches.
std::string family_row_name(Site site, const std::vector<int64_t>& orders, int max_level);

}  // namespace crs
