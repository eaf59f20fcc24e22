#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crs/families.hpp"
#include "crs/group_table.hpp"

#include "test_util.hpp"
#include "crs/subgroup.hpp"

using namespace crs;

TEST_CASE("axiom suite passes on the shipped families at small truncation") {
  VerifyOptions opts;
  opts.threads = 2;
  CHECK(verify_crossed_axioms(trivial_table(Site::Nabla, 3), opts).ok);
  CHECK(verify_crossed_axioms(sym_table(Site::Nabla, 4), opts).ok);
  CHECK(verify_crossed_axioms(sym_table(Site::Delta, 3), opts).ok);
  CHECK(verify_crossed_axioms(cyc_table(4), opts).ok);
  CHECK(verify_crossed_axioms(dihedral_table(4), opts).ok);
  CHECK(verify_crossed_axioms(hyp_table(Site::Nabla, 3), opts).ok);
  CHECK(verify_crossed_axioms(weyl_table(Site::AugDelta, 3), opts).ok);
  CHECK(verify_crossed_axioms(weyl_table(Site::Nabla, 3), opts).ok);
}

TEST_CASE("a corrupted restriction entry is reported with its witnesses") {
  CrossedGroupTable G = sym_table(Site::AugDelta, 3);
  // corrupt one non-identity restriction value at the top level
  const int a = 3, b = 2;
  const int32_t phi = 0;
  auto& slot = G.rest[a][(static_cast<size_t>(G.hoff[a][b]) + phi) * G.order(a) + 2];
  slot = (slot + 1) % G.order(b);
  VerifyReport rep = verify_crossed_axioms(G);
  CHECK(!rep.ok);
  REQUIRE(!rep.violations.empty());
  // the violation names a concrete instance
  CHECK(!rep.violations.front().detail.empty());
}

TEST_CASE("total category composition") {
  CrossedGroupTable S = sym_table(Site::AugDelta, 3);
  // units are neutral
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      const int H = homs(S.site, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int32_t x = 0; x < S.order(b); ++x) {
          TotalMor f{b, a, p, x};
          CHECK(total_compose(S, total_identity(S, a), f) == f);
          CHECK(total_compose(S, f, total_identity(S, b)) == f);
        }
    }
  // the canonical functor A -> A_G embeds composition
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c) {
        const auto& Hab = homs(S.site, a, b);
        const auto& Hbc = homs(S.site, b, c);
        const auto& cmp = comp_table(S.site, a, b, c);
        for (int32_t q = 0; q < Hbc.size(); ++q)
          for (int32_t p = 0; p < Hab.size(); ++p) {
            TotalMor f{a, b, p, S.lvl[a].unit};
            TotalMor g{b, c, q, S.lvl[b].unit};
            TotalMor gf = total_compose(S, g, f);
            CHECK(gf.phi == cmp[static_cast<size_t>(q) * Hab.size() + p]);
            CHECK(gf.x == S.lvl[a].unit);
          }
      }
  // associativity over all composable triples at truncation 2
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        for (int d = 0; d <= 2; ++d) {
          const auto& Hab = homs(S.site, a, b);
          const auto& Hbc = homs(S.site, b, c);
          const auto& Hcd = homs(S.site, c, d);
          for (int32_t p = 0; p < Hab.size(); ++p)
            for (int32_t q = 0; q < Hbc.size(); ++q)
              for (int32_t r = 0; r < Hcd.size(); ++r)
                for (int32_t x = 0; x < S.order(a); ++x)
                  for (int32_t y = 0; y < S.order(b); ++y)
                    for (int32_t z = 0; z < S.order(c); ++z) {
                      TotalMor f{a, b, p, x}, g{b, c, q, y}, h{c, d, r, z};
                      CHECK(total_compose(S, h, total_compose(S, g, f)) ==
                            total_compose(S, total_compose(S, h, g), f));
                    }
        }
}

TEST_CASE("example of the twisted composition in the symmetric family") {
  // psi = id at <2> carrying the transposition, phi = (1,2) with the unit:
  // composite = (phi^y, phi*(y)·e)
  CrossedGroupTable S = sym_table(Site::AugDelta, 2);
  const int32_t swp = S.lvl[2].index_of(Perm{1, 0}, 0);
  REQUIRE(swp >= 0);
  const auto& H = homs(Site::AugDelta, 2, 2);
  const int32_t phi = H.index_of(SiteMorphism{Site::AugDelta, 2, 2, {1, 2}});
  TotalMor psi_y{2, 2, identity_index(Site::AugDelta, 2), swp};
  TotalMor phi_x{2, 2, phi, S.lvl[2].unit};
  TotalMor out = total_compose(S, psi_y, phi_x);
  CHECK(out.phi == S.act_on(2, 2, swp, phi));
  CHECK(out.x == S.restrict_el(2, 2, phi, swp));
}

TEST_CASE("generated subgroups") {
  CrossedGroupTable W = weyl_table(Site::AugDelta, 3);
  // the empty set generates the trivial family
  SubgroupFamily T = generated_subgroup(W, {});
  CHECK(T.orders() == std::vector<int64_t>{1, 1, 1, 1});
  // at level 2 a transposition is the rotation, so it generates the cyclic
  // family; a transposition at level 3 generates the symmetric one
  const int32_t t2 = W.lvl[2].index_of(Perm{1, 0}, 0);
  REQUIRE(t2 >= 0);
  CHECK(generated_subgroup(W, {{2, t2}}).orders() == std::vector<int64_t>{1, 1, 2, 3});
  const int32_t t3 = W.lvl[3].index_of(Perm{1, 0, 2}, 0);
  REQUIRE(t3 >= 0);
  SubgroupFamily F = generated_subgroup(W, {{3, t3}});
  CHECK(F.orders() == std::vector<int64_t>{1, 1, 2, 6});
  // the full reversal at level 1 generates the reflexive family
  const int32_t r = W.lvl[1].index_of(perm_identity(1), 1);
  SubgroupFamily R = generated_subgroup(W, {{1, r}});
  CHECK(R.orders() == std::vector<int64_t>{1, 2, 2, 2});
  // idempotence
  std::vector<TaggedElement> again;
  for (int a = 0; a <= 3; ++a)
    for (int32_t x : R.members[a]) again.push_back({a, x});
  CHECK(generated_subgroup(W, again) == R);
  // matches the intersection of all closed families containing the seed
  // (oracle on the small reflexive case)
  CHECK(family_closed(W, R));
  CHECK(R.contains(1, r));
}

TEST_CASE("the singleton formula of the subgroup lemma") {
  // G'(a) = subgroup generated by { phi*(x^eps) : phi: a -> a0 }
  CrossedGroupTable W = weyl_table(Site::AugDelta, 3);
  const int a0 = 2;
  const int32_t x = W.lvl[a0].index_of(Perm{1, 0}, 0b01);
  REQUIRE(x >= 0);
  SubgroupFamily F = generated_subgroup(W, {{a0, x}});
  for (int a = 0; a <= 3; ++a) {
    // span of all restrictions of x and its inverse
    std::vector<uint8_t> in(W.order(a), 0);
    std::vector<int32_t> ws = {W.lvl[a].unit};
    in[W.lvl[a].unit] = 1;
    const int H = homs(W.site, a, a0).size();
    for (int32_t p = 0; p < H; ++p)
      for (int32_t g : {W.restrict_el(a0, a, p, x), W.restrict_el(a0, a, p, W.lvl[a0].invx(x))})
        if (!in[g]) {
          in[g] = 1;
          ws.push_back(g);
        }
    for (size_t i = 0; i < ws.size(); ++i)
      for (size_t j = 0; j < ws.size(); ++j) {
        const int32_t z = W.lvl[a].mulxy(ws[i], ws[j]);
        if (!in[z]) {
          in[z] = 1;
          ws.push_back(z);
        }
      }
    std::sort(ws.begin(), ws.end());
    CHECK(ws == F.members[a]);
  }
}

TEST_CASE("kernel and image") {
  CrossedGroupTable W = weyl_table(Site::AugDelta, 3);
  CrossedGroupTable L = cyc_table(3);
  SUBCASE("identity map") {
    CrossedGroupMap id = identity_map(W);
    KernelImage ki = image_kernel_factor(id);
    CHECK(ki.kernel == trivial_family(W));
    CHECK(ki.image == full_family(W));
  }
  SUBCASE("map to the trivial group") {
    CrossedGroupTable T = trivial_table(Site::AugDelta, 3);
    CrossedGroupMap to_t;
    to_t.src = &W;
    to_t.dst = &T;
    to_t.f.resize(4);
    for (int a = 0; a <= 3; ++a) to_t.f[a].assign(W.order(a), 0);
    // W is genuinely crossed, so the unique A-map to * is NOT a crossed map
    CHECK(!verify_map(to_t).ok);
    KernelImage ki = image_kernel_factor(to_t);
    CHECK(ki.kernel == full_family(W));
    CHECK(ki.image == full_family(T));
  }
  SUBCASE("for a non-crossed group the unique map to * is a crossed map") {
    CrossedGroupTable C = constant_c2(Site::AugDelta, 3);
    REQUIRE(verify_crossed_axioms(C).ok);
    REQUIRE(is_non_crossed(C));
    CrossedGroupTable T = trivial_table(Site::AugDelta, 3);
    CrossedGroupMap to_t;
    to_t.src = &C;
    to_t.dst = &T;
    to_t.f.assign(4, {0, 0});
    CHECK(verify_map(to_t).ok);
  }
  SUBCASE("the canonical map of the cyclic family is injective") {
    CrossedGroupMap m = canonical_map(L, W);
    KernelImage ki = image_kernel_factor(m);
    CHECK(ki.kernel == trivial_family(L));
    for (int a = 0; a <= 3; ++a)
      CHECK(static_cast<int64_t>(ki.image.members[a].size()) == L.order(a));
    // kernels are non-crossed: levelwise |ker|*|im| = |source|
    for (int a = 0; a <= 3; ++a)
      CHECK(static_cast<int64_t>(ki.kernel.members[a].size()) *
                static_cast<int64_t>(ki.image.members[a].size()) ==
            L.order(a));
    CrossedGroupTable K = subtable(L, ki.kernel);
    CHECK(is_non_crossed(K));
  }
}

TEST_CASE("pullbacks are computed degreewise") {
  CrossedGroupTable W = weyl_table(Site::AugDelta, 2);
  SUBCASE("pullback of identities is the diagonal") {
    CrossedGroupMap id1 = identity_map(W), id2 = identity_map(W);
    PullbackTable P = pullback(id1, id2);
    std::string why;
    std::vector<std::vector<int32_t>> bij(W.max_level + 1);
    for (int a = 0; a <= W.max_level; ++a)
      for (const auto& [x, y] : P.pairs[a]) bij[a].push_back(x);
    CHECK_MESSAGE(tables_equal(P.table, W, bij, &why), why);
    CHECK(verify_crossed_axioms(P.table).ok);
  }
  SUBCASE("pullback along an identity is the source") {
    CrossedGroupTable S = sym_table(Site::AugDelta, 2);
    CrossedGroupMap f = canonical_map(S, W);
    PullbackTable P = pullback(f, identity_map(W));
    for (int a = 0; a <= 2; ++a) CHECK(P.table.order(a) == S.order(a));
    CHECK(verify_map(P.proj1).ok);
  }
  SUBCASE("G^nc as a pullback matches the kernel") {
    // f: H -> W; G^red = image; G^nc = pullback of * -> image <- H equals ker
    CrossedGroupTable D = dihedral_table(2);
    CrossedGroupMap f = canonical_map(D, W);
    KernelImage ki = image_kernel_factor(f);
    CrossedGroupTable I = subtable(W, ki.image);
    CrossedGroupMap to_I;  // D -> I
    to_I.src = &D;
    to_I.dst = &I;
    to_I.f.resize(3);
    for (int a = 0; a <= 2; ++a) {
      std::vector<int32_t> back(W.order(a), -1);
      for (size_t i = 0; i < ki.image.members[a].size(); ++i)
        back[ki.image.members[a][i]] = static_cast<int32_t>(i);
      for (int32_t x = 0; x < D.order(a); ++x) to_I.f[a].push_back(back[f.f[a][x]]);
    }
    CrossedGroupTable T = trivial_table(Site::AugDelta, 2);
    CrossedGroupMap unit_map;
    unit_map.src = &T;
    unit_map.dst = &I;
    unit_map.f.resize(3);
    for (int a = 0; a <= 2; ++a) unit_map.f[a] = {I.lvl[a].unit};
    PullbackTable P = pullback(to_I, unit_map);
    for (int a = 0; a <= 2; ++a)
      CHECK(static_cast<size_t>(P.table.order(a)) == ki.kernel.members[a].size());
    CHECK(is_non_crossed(P.table));
  }
}

TEST_CASE("quotient A-sets") {
  CrossedGroupTable W = weyl_table(Site::AugDelta, 3);
  SUBCASE("by the full family: points") {
    QuotientASet Q = quotient_aset(W, full_family(W));
    for (int a = 0; a <= 3; ++a) CHECK(Q.classes[a] == 1);
  }
  SUBCASE("by the trivial family: the group itself") {
    QuotientASet Q = quotient_aset(W, trivial_family(W));
    for (int a = 0; a <= 3; ++a) CHECK(Q.classes[a] == W.order(a));
  }
  SUBCASE("S~/S is the constant C2") {
    // S~ = permutations with a constant sign vector inside W
    SubgroupFamily st, s;
    st.members.resize(4);
    s.members.resize(4);
    for (int a = 0; a <= 3; ++a) {
      const int c = a;
      for (int32_t x = 0; x < W.order(a); ++x) {
        const WeylElem& e = W.lvl[a].elems[x];
        if (e.signs == 0) s.members[a].push_back(x);
        if (e.signs == 0 || e.signs == (c ? (1u << c) - 1 : 0)) st.members[a].push_back(x);
      }
      std::sort(st.members[a].begin(), st.members[a].end());
      st.members[a].erase(std::unique(st.members[a].begin(), st.members[a].end()),
                          st.members[a].end());
    }
    REQUIRE(family_closed(W, st));
    REQUIRE(family_closed(W, s));
    CrossedGroupTable ST = subtable(W, st);
    // re-express S inside ST
    SubgroupFamily s_in;
    s_in.members.resize(4);
    for (int a = 0; a <= 3; ++a) {
      for (size_t i = 0; i < st.members[a].size(); ++i)
        if (W.lvl[a].elems[st.members[a][i]].signs == 0)
          s_in.members[a].push_back(static_cast<int32_t>(i));
    }
    QuotientASet Q = quotient_aset(ST, s_in);
    for (int a = 1; a <= 3; ++a) CHECK(Q.classes[a] == 2);
    // all restriction maps on the quotient are the identity (constant C2)
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) {
        const int H = homs(Site::AugDelta, b, a).size();
        for (int32_t p = 0; p < H; ++p)
          for (int32_t cc = 0; cc < 2; ++cc) CHECK(Q.restrict_coset(a, b, p, cc) == cc);
      }
    // left-coset representative independence as stated
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b) {
        const int H = homs(Site::AugDelta, b, a).size();
        for (int32_t p = 0; p < H; ++p)
          for (int32_t x = 0; x < ST.order(a); ++x)
            for (int32_t u : s_in.members[a]) {
              const int32_t ux = ST.lvl[a].mulxy(u, x);
              CHECK(Q.coset_of[b][ST.restrict_el(a, b, p, ux)] ==
                    Q.coset_of[b][ST.restrict_el(a, b, p, x)]);
            }
      }
  }
  SUBCASE("non-normal subgroups are rejected") {
    // the cyclic family is not levelwise normal in S_4
    CrossedGroupTable S = sym_table(Site::AugDelta, 4);
    const int32_t rot = S.lvl[4].index_of(rotation_perm(4, 1), 0);
    REQUIRE(rot >= 0);
    SubgroupFamily F = generated_subgroup(S, {{4, rot}});
    CHECK(F.orders() == std::vector<int64_t>{1, 1, 2, 3, 4});
    CHECK_THROWS_AS(quotient_aset(S, F), std::invalid_argument);
  }
}

TEST_CASE("is_non_crossed") {
  CHECK(is_non_crossed(trivial_table(Site::AugDelta, 3)));
  CHECK(!is_non_crossed(sym_table(Site::AugDelta, 3)));
}
