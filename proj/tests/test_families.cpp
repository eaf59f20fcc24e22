#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "crs/families.hpp"
#include "crs/subgroup.hpp"

using namespace crs;

namespace {

// Oracle: all order-preserving carrier maps b -> a as position maps.
std::vector<std::vector<int32_t>> all_monotone(int cb, int ca) {
  std::vector<std::vector<int32_t>> out;
  std::vector<int32_t> cur(cb, 0);
  if (cb == 0) return {cur};
  for (;;) {
    out.push_back(cur);
    int i = cb - 1;
    while (i >= 0 && cur[i] == ca - 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < cb; ++j) cur[j] = cur[i];
  }
  return out;
}

std::vector<Perm> all_perms(int k) {
  std::vector<Perm> out;
  Perm p = perm_identity(k);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int32_t> apply_pos(const std::vector<int32_t>& pm, const Perm& dom_perm) {
  std::vector<int32_t> r(pm.size());
  for (size_t i = 0; i < pm.size(); ++i) r[i] = pm[dom_perm[i]];
  return r;
}

}  // namespace

TEST_CASE("sym_action: unit, fibers, uniqueness oracle") {
  SiteMorphism phi{Site::AugDelta, 3, 2, {1, 1, 2}};
  const Perm id2 = perm_identity(2);
  CHECK(sym_action(phi, id2) == phi);

  Perm swap2 = {1, 0};
  CHECK(sym_action(phi, swap2).values == std::vector<Pt>{1, 2, 2});

  // constant maps move to the permuted point
  SiteMorphism cst{Site::AugDelta, 2, 3, {2, 2}};
  Perm rot3 = {1, 2, 0};
  CHECK(sym_action(cst, rot3).values == std::vector<Pt>{3, 3});

  // Uniqueness: phi^sigma is the unique order-preserving map through which
  // sigma∘phi factors after a permutation of the domain.
  for (int m = 0; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n)
      for (const auto& f : hom_set(Site::AugDelta, m, n)) {
        const auto pm = f.pos_map();
        for (const auto& sg : all_perms(n)) {
          std::vector<int32_t> target(pm.size());
          for (size_t i = 0; i < pm.size(); ++i) target[i] = sg[pm[i]];
          int found = 0;
          std::vector<int32_t> unique_pm;
          for (const auto& cand : all_monotone(m, n)) {
            bool factors = false;
            for (const auto& tau : all_perms(m))
              if (apply_pos(cand, tau) == target) {
                factors = true;
                break;
              }
            if (factors) {
              ++found;
              unique_pm = cand;
            }
          }
          CHECK(found == 1);
          CHECK(unique_pm == sym_action(f, sg).pos_map());
        }
      }
}

TEST_CASE("sym_restrict and the two-property characterization") {
  SiteMorphism phi{Site::AugDelta, 3, 2, {1, 1, 2}};
  Perm swap2 = {1, 0};
  CHECK(sym_restrict(phi, swap2) == Perm{1, 2, 0});  // 1->2, 2->3, 3->1
  CHECK(sym_restrict(identity_mor(Site::AugDelta, 3), Perm{2, 0, 1}) == Perm{2, 0, 1});
  CHECK(sym_restrict(phi, perm_identity(2)) == perm_identity(3));

  // oracle: tau = phi*(sigma)·beta_phi(eps) is the unique permutation with
  // phi^sigma ∘ tau = sigma ∘ phi and the prescribed fiber orientations
  for (Site s : {Site::AugDelta, Site::Nabla}) {
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n)
        for (const auto& f : hom_set(s, m, n)) {
          const int ca = carrier_size(s, n), cb = carrier_size(s, m);
          const auto pm = f.pos_map();
          for (const auto& sg : stabilized_perms(s, n))
            for (uint32_t mask = 0; mask < (1u << ca); ++mask) {
              std::vector<int32_t> fsz(ca, 0);
              for (auto p : pm) fsz[p]++;
              if (!fiber_sizes_valid(s, permuted_fiber_sizes(fsz, sg))) continue;
              const Perm tau = weyl_restrict_perm(f, sg, mask);
              const auto pm2 = sym_action(f, sg).pos_map();
              int matches = 0;
              for (const auto& cand : all_perms(cb)) {
                bool square = true;
                for (int i = 0; i < cb && square; ++i)
                  if (pm2[cand[i]] != sg[pm[i]]) square = false;
                if (!square) continue;
                bool orient = true;
                for (int i = 0; i < ca && orient; ++i) {
                  std::vector<int32_t> fib;
                  for (int d = 0; d < cb; ++d)
                    if (pm[d] == i) fib.push_back(cand[d]);
                  for (size_t q = 1; q < fib.size(); ++q) {
                    const bool inc = fib[q] > fib[q - 1];
                    if (inc == bool((mask >> i) & 1u)) orient = false;
                  }
                }
                if (!orient) continue;
                ++matches;
                CHECK(cand == tau);
              }
              CHECK(matches == 1);
            }
        }
  }
}

TEST_CASE("cyclic restriction agrees with the symmetric oracle") {
  SiteMorphism id3 = identity_mor(Site::AugDelta, 3);
  CHECK(cyc_restrict_shift(id3, 1) == 1);
  // mu: <1> -> <2>, 1 |-> 2, rotation by one: lands in the trivial C_1
  SiteMorphism mu12{Site::AugDelta, 1, 2, {2}};
  CHECK(cyc_restrict_shift(mu12, 1) == 0);
  // surjective monotone (1,1,2), rotation by one
  SiteMorphism mu32{Site::AugDelta, 3, 2, {1, 1, 2}};
  CHECK(cyc_restrict_shift(mu32, 1) == 1);
  CHECK(rotation_perm(3, 1) == sym_restrict(mu32, rotation_perm(2, 1)));
  // exhaustive cross-check: restricting a rotation gives the rotation by the
  // number of domain points over the collapsed top segment
  for (int m = 0; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n)
      for (const auto& f : hom_set(Site::AugDelta, m, n))
        for (int k = 0; k < n; ++k) {
          const Perm tau = sym_restrict(f, rotation_perm(n, k));
          int shift = -1;
          CHECK(is_rotation(tau, &shift));
          CHECK(shift == cyc_restrict_shift(f, k));
        }
}

TEST_CASE("hyperoctahedral restriction") {
  WeylElem triv{perm_identity(1), 0};
  SiteMorphism f21{Site::AugDelta, 2, 1, {1, 1}};
  CHECK(hyp_restrict(f21, triv) == WeylElem{perm_identity(2), 0});
  // (id; -1) at level 1 restricts along (1,1) to the fiber reversal with
  // signs (-1,-1)
  WeylElem neg{perm_identity(1), 1};
  const WeylElem r = hyp_restrict(f21, neg);
  CHECK(r.perm == Perm{1, 0});
  CHECK(r.signs == 0b11u);
  // endpoint signs pull back to +1 along the hyperoctahedral part
  SiteMorphism g{Site::Nabla, 2, 1, {1, 1}};
  WeylElem x{perm_identity(3), 0b010};  // -1 only at the interior point
  const WeylElem rx = hyp_restrict(g, x);
  CHECK((rx.signs & 0b1001u) == 0);
  CHECK(((rx.signs >> 1) & 1u) == 1);
  CHECK(((rx.signs >> 2) & 1u) == 1);
}

TEST_CASE("stabilized permutation group: definition vs closed form") {
  for (Site s : {Site::Delta, Site::AugDelta, Site::Nabla})
    for (int n = 0; n <= 3; ++n) {
      auto a = stabilized_perms(s, n);
      auto b = stabilized_perms_by_definition(s, n, 5);
      CHECK(a == b);
    }
  CHECK(stabilized_perms(Site::AugDelta, 3).size() == 6);
  CHECK(stabilized_perms(Site::Nabla, 3).size() == 12);  // S_3 x S({-oo,oo})
  CHECK(stabilized_perms(Site::Delta, 3).size() == 24);  // S_4
}

TEST_CASE("weyl group orders by raw enumeration") {
  CHECK(weyl_level_elements(Site::AugDelta, 0, 2).size() == 1);
  CHECK(weyl_level_elements(Site::AugDelta, 2, 4).size() == 8);
  CHECK(weyl_level_elements(Site::Nabla, 1, 3).size() == 4);  // H_1 x C_2
  for (int n = 0; n <= 3; ++n) {
    CHECK(weyl_level_elements(Site::AugDelta, n, n + 2).size() == (factorial(n) << n));
    CHECK(weyl_level_elements(Site::Nabla, n, n + 2).size() == (factorial(n) << (n + 1)));
    CHECK(weyl_level_elements(Site::Delta, n, n + 2).size() == (factorial(n + 1) << (n + 1)));
    CHECK(weyl_level_elements(Site::Nabla, n, n + 2) == weyl_level_elements(Site::Nabla, n, n + 4));
  }
  CHECK_THROWS(weyl_level_elements(Site::Nabla, 2, 3));  // refuses a short probe cap
}

TEST_CASE("explicit isomorphisms with H_n and H_n x C2") {
  CrossedGroupTable WA = weyl_table(Site::AugDelta, 3);
  CrossedGroupTable WN = weyl_table(Site::Nabla, 3);
  for (int n = 0; n <= 3; ++n) {
    std::string why;
    CHECK_MESSAGE(check_weyl_isomorphism(WA, n, &why), why);
    CHECK_MESSAGE(check_weyl_isomorphism(WN, n, &why), why);
  }
}

TEST_CASE("hyperoctahedral table on aug-delta coincides with the Weyl table") {
  CrossedGroupTable H = hyp_table(Site::AugDelta, 3);
  CrossedGroupTable W = weyl_table(Site::AugDelta, 3);
  std::string why;
  CHECK_MESSAGE(tables_equal(H, W, {}, &why), why);
}

TEST_CASE("dihedral family has the right orders") {
  CrossedGroupTable D = dihedral_table(4);
  CHECK(D.order(0) == 1);
  CHECK(D.order(1) == 2);
  CHECK(D.order(2) == 4);
  CHECK(D.order(3) == 6);
  CHECK(D.order(4) == 8);
}

TEST_CASE("canonical map R~") {
  CrossedGroupTable W = weyl_table(Site::AugDelta, 3);
  CrossedGroupTable L = cyc_table(3);
  CrossedGroupMap m = canonical_map(L, W);
  for (int a = 0; a <= 3; ++a) CHECK(m.f[a][L.lvl[a].unit] == W.lvl[a].unit);
  // rotations land on their underlying permutation with all signs +1
  const int32_t rot = 1;  // rotation by one at level 3
  const WeylElem& img = W.lvl[3].elems[m.f[3][rot]];
  CHECK(img.perm == rotation_perm(3, 1));
  CHECK(img.signs == 0);
  CHECK(verify_map(m).ok);
  // under H == W_AugDelta, (id;-1) at level 1 maps to itself
  CrossedGroupTable H = hyp_table(Site::AugDelta, 3);
  CrossedGroupMap mh = canonical_map(H, W);
  const int32_t neg = H.lvl[1].index_of(perm_identity(1), 1);
  REQUIRE(neg >= 0);
  CHECK(W.lvl[1].elems[mh.f[1][neg]] == WeylElem{perm_identity(1), 1});
  CHECK(verify_map(mh).ok);
  // the canonical map of W itself is the identity
  CrossedGroupMap mw = canonical_map(W, W);
  for (int a = 0; a <= 3; ++a)
    for (int32_t x = 0; x < W.order(a); ++x) CHECK(mw.f[a][x] == x);
}

TEST_CASE("canonical map on the interval site") {
  CrossedGroupTable W = weyl_table(Site::Nabla, 3);
  CrossedGroupTable S = sym_table(Site::Nabla, 3);
  CrossedGroupMap m = canonical_map(S, W);
  CHECK(verify_map(m).ok);
  for (int32_t x = 0; x < S.order(2); ++x) {
    const WeylElem& img = W.lvl[2].elems[m.f[2][x]];
    CHECK(img.signs == 0);
    CHECK(img.perm == S.lvl[2].elems[x].perm);
  }
}

TEST_CASE("terminality: exhaustive map search") {
  CrossedGroupTable W2 = weyl_table(Site::AugDelta, 2);
  SUBCASE("trivial group") {
    CrossedGroupTable T = trivial_table(Site::AugDelta, 2);
    auto r = terminality_check(T, W2);
    CHECK(r.unique);
    CHECK(r.count == 1);
  }
  SUBCASE("the symmetric family") {
    CrossedGroupTable S = sym_table(Site::AugDelta, 2);
    auto r = terminality_check(S, W2);
    CHECK(r.unique);
    CrossedGroupMap cm = canonical_map(S, W2);
    CHECK(r.witness.f == cm.f);
  }
  SUBCASE("W itself admits only the identity") {
    auto r = terminality_check(W2, W2);
    CHECK(r.unique);
    for (int a = 0; a <= 2; ++a)
      for (int32_t x = 0; x < W2.order(a); ++x) CHECK(r.witness.f[a][x] == x);
  }
}

TEST_CASE("the cyclic subsets are not closed under interval restriction") {
  CrossedGroupTable S = sym_table(Site::Nabla, 3);
  SubgroupFamily rotations;
  rotations.members.resize(4);
  for (int n = 0; n <= 3; ++n) {
    for (int k = 0; k < std::max(1, n); ++k) {
      Perm p(carrier_size(Site::Nabla, n));
      p[0] = 0;
      p[static_cast<size_t>(n) + 1] = n + 1;
      for (int i = 1; i <= n; ++i) p[i] = 1 + (i - 1 + k) % n;
      const int32_t idx = S.lvl[n].index_of(p, 0);
      REQUIRE(idx >= 0);
      rotations.members[n].push_back(idx);
    }
    std::sort(rotations.members[n].begin(), rotations.members[n].end());
  }
  std::string witness;
  CHECK(!family_closed(S, rotations, &witness));
  CHECK(!witness.empty());
}
