#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crs/group_table.hpp"

namespace crs {

// A family of levelwise subgroups of an ambient table, closed under all
// restriction maps (actions are inherited, so this is a crossed subgroup).
struct SubgroupFamily {
  std::vector<std::vector<int32_t>> members;  // sorted element indices per level

  bool operator==(const SubgroupFamily&) const = default;
  bool operator<(const SubgroupFamily& o) const { return members < o.members; }
  std::vector<int64_t> orders() const;
  bool contains(int level, int32_t x) const;
};

struct TaggedElement {
  int level = 0;
  int32_t index = 0;
};

SubgroupFamily trivial_family(const CrossedGroupTable& G);
SubgroupFamily full_family(const CrossedGroupTable& G);

// Smallest levelwise-subgroup family containing the seed and closed under
// every restriction map at the truncation.
SubgroupFamily generated_subgroup(const CrossedGroupTable& G,
                                  const std::vector<TaggedElement>& seed);

// Closure of an existing family plus one extra element (used by the
// subgroup enumeration).
SubgroupFamily closure_with(const CrossedGroupTable& G, const SubgroupFamily& base,
                            const TaggedElement& extra);

// Smallest closed family containing both.
SubgroupFamily join_families(const CrossedGroupTable& G, const SubgroupFamily& A,
                             const SubgroupFamily& B);

bool family_subset(const SubgroupFamily& A, const SubgroupFamily& B);

bool family_closed(const CrossedGroupTable& G, const SubgroupFamily& F,
                   std::string* witness = nullptr);

// Standalone table for a family: element i of level a is members[a][i].
CrossedGroupTable subtable(const CrossedGroupTable& G, const SubgroupFamily& F);

// Inclusion as a crossed-group map into the ambient table.
CrossedGroupMap inclusion_map(const CrossedGroupTable& G, const SubgroupFamily& F,
                              const CrossedGroupTable& sub);

// --- kernels, images, pullbacks, quotients ---

struct KernelImage {
  SubgroupFamily kernel;  // in the source
  SubgroupFamily image;   // in the target
};
KernelImage image_kernel_factor(const CrossedGroupMap& f);

// Degreewise fiber product of f: G1 -> K and g: G2 -> K; elements are pairs,
// the action is inherited through K.
struct PullbackTable {
  CrossedGroupTable table;
  std::vector<std::vector<std::pair<int32_t, int32_t>>> pairs;  // per level
  CrossedGroupMap proj1, proj2;
};
PullbackTable pullback(const CrossedGroupMap& f, const CrossedGroupMap& g);

// Quotient A-set G/N for a levelwise-normal crossed subgroup N.
struct QuotientASet {
  const CrossedGroupTable* G = nullptr;
  std::vector<int32_t> classes;                 // number of cosets per level
  std::vector<std::vector<int32_t>> coset_of;   // G-index -> coset id
  std::vector<std::vector<int32_t>> rep_of;     // coset id -> minimal representative
  std::vector<std::vector<int32_t>> rest;       // [(hoff+phi)*classes + c] like the ambient layout
  std::vector<std::vector<int32_t>> mul;        // induced group structure per level

  int32_t restrict_coset(int a, int b, int32_t phi, int32_t c) const;
};

bool is_levelwise_normal(const CrossedGroupTable& G, const SubgroupFamily& N);
// Throws std::invalid_argument for non-normal N.  Representative
// independence of the induced restriction is checked exhaustively.
QuotientASet quotient_aset(const CrossedGroupTable& G, const SubgroupFamily& N);

}  // namespace crs
