#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crs/json_io.hpp"
#include "crs/site.hpp"

using namespace crs;

namespace {

// independent enumeration oracle: weakly increasing sequences by recursion
int count_weakly_increasing(int len, int alphabet) {
  if (len == 0) return 1;
  // C(alphabet + len - 1, len)
  long long num = 1, den = 1;
  for (int i = 0; i < len; ++i) {
    num *= alphabet + len - 1 - i;
    den *= i + 1;
  }
  return static_cast<int>(num / den);
}

}  // namespace

TEST_CASE("carriers") {
  CHECK(carrier(Site::Delta, 2) == std::vector<Pt>{0, 1, 2});
  CHECK(carrier(Site::AugDelta, 0).empty());
  CHECK(carrier(Site::AugDelta, 3) == std::vector<Pt>{1, 2, 3});
  CHECK(carrier(Site::Nabla, 1) == std::vector<Pt>{kNegInf, 1, kPosInf});
  CHECK(pt_pos(Site::Nabla, 2, kPosInf) == 3);
  CHECK(pos_pt(Site::Nabla, 2, 0) == kNegInf);
}

TEST_CASE("hom set enumeration") {
  // (AugDelta, 1, 2): two morphisms (1), (2)
  auto h12 = hom_set(Site::AugDelta, 1, 2);
  REQUIRE(h12.size() == 2);
  CHECK(h12[0].values == std::vector<Pt>{1});
  CHECK(h12[1].values == std::vector<Pt>{2});
  // (AugDelta, 0, n): exactly one morphism
  for (int n = 0; n <= 4; ++n) CHECK(hom_set(Site::AugDelta, 0, n).size() == 1);
  // no maps into the empty level
  CHECK(hom_set(Site::AugDelta, 2, 0).empty());
  // (Nabla, 1, 1): three morphisms, value in {-inf, 1, inf}
  auto n11 = hom_set(Site::Nabla, 1, 1);
  REQUIRE(n11.size() == 3);
  CHECK(n11[0].values == std::vector<Pt>{kNegInf});
  CHECK(n11[1].values == std::vector<Pt>{1});
  CHECK(n11[2].values == std::vector<Pt>{kPosInf});
  // counts against the stars-and-bars oracle, and lexicographic order
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n) {
      auto hs = hom_set(Site::Nabla, m, n);
      CHECK(static_cast<int>(hs.size()) == count_weakly_increasing(m, n + 2));
      for (size_t i = 1; i < hs.size(); ++i) CHECK(hs[i - 1].values < hs[i].values);
      for (const auto& f : hs) CHECK(is_valid(f));
    }
  CHECK(homs(Site::AugDelta, 1, 3).size() == 3);
  CHECK(homs(Site::Nabla, 1, 3).size() == 5);
}

TEST_CASE("composition laws, exhaustively at small levels") {
  for (Site s : {Site::Delta, Site::AugDelta, Site::Nabla}) {
    const int N = 3;
    for (int a = 0; a <= N; ++a)
      for (int b = 0; b <= N; ++b) {
        for (const auto& f : hom_set(s, a, b)) {
          CHECK(compose(identity_mor(s, b), f) == f);
          CHECK(compose(f, identity_mor(s, a)) == f);
        }
        for (int c = 0; c <= N; ++c)
          for (int d = 0; d <= 2; ++d)
            for (const auto& f : hom_set(s, a, b))
              for (const auto& g : hom_set(s, b, c))
                for (const auto& h : hom_set(s, c, d))
                  CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
      }
  }
  // pointwise example: (1,1) after (1,2) in AugDelta
  SiteMorphism psi{Site::AugDelta, 2, 1, {1, 1}};
  SiteMorphism phi{Site::AugDelta, 2, 2, {1, 2}};
  CHECK(compose(psi, phi).values == std::vector<Pt>{1, 1});
}

TEST_CASE("fibers") {
  SiteMorphism f{Site::AugDelta, 3, 2, {1, 1, 2}};
  CHECK(fiber(f, 1) == std::vector<Pt>{1, 2});
  CHECK(fiber(f, 2) == std::vector<Pt>{3});
  CHECK_THROWS(fiber(f, 3));
  // a Nabla map with empty interior: the fiber over -inf holds -inf and
  // every interior point sent there
  SiteMorphism g{Site::Nabla, 2, 1, {kNegInf, kNegInf}};
  CHECK(fiber(g, kNegInf) == std::vector<Pt>{kNegInf, 1, 2});
  CHECK(fiber(g, kPosInf) == std::vector<Pt>{kPosInf});
  // concatenating fibers in codomain order recovers the domain
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (const auto& h : hom_set(Site::Nabla, m, n)) {
        std::vector<Pt> cat;
        for (Pt p : carrier(Site::Nabla, n)) {
          auto fib = fiber(h, p);
          cat.insert(cat.end(), fib.begin(), fib.end());
        }
        CHECK(cat == carrier(Site::Nabla, m));
      }
}

TEST_CASE("hom order and the internal co-relation") {
  // alpha <= beta in the induced relation iff there is a common extension
  // along iota0, iota1; this must coincide with the carrier order
  for (Site s : {Site::Delta, Site::AugDelta, Site::Nabla}) {
    const int sl = s_level(s), sb = sbar_level(s);
    const auto& Hs = homs(s, sl, sb);
    const auto i0 = Hs.list[iota_index(s, 0)];
    const auto i1 = Hs.list[iota_index(s, 1)];
    for (int n = 0; n <= 3; ++n) {
      const auto& H = homs(s, sl, n);
      CHECK(H.size() == carrier_size(s, n));
      for (int32_t a = 0; a < H.size(); ++a)
        for (int32_t b = 0; b < H.size(); ++b) {
          bool related = false;
          for (const auto& bar : homs(s, sb, n).list)
            if (compose(bar, i0) == H.list[a] && compose(bar, i1) == H.list[b]) related = true;
          CHECK(related == (a <= b));  // carrier order = enumeration order
        }
      // refl is a common section of both precompositions
      for (int32_t a = 0; a < H.size(); ++a) {
        const auto& r = homs(s, sb, n).list[refl_index(s, n, a)];
        CHECK(compose(r, i0) == H.list[a]);
        CHECK(compose(r, i1) == H.list[a]);
      }
      // post-composition preserves the order
      for (int m = 0; m <= 3; ++m)
        for (const auto& f : hom_set(s, n, m)) {
          const auto pm = f.pos_map();
          for (size_t i = 1; i < pm.size(); ++i) CHECK(pm[i - 1] <= pm[i]);
        }
    }
  }
}

TEST_CASE("interval factorization") {
  // phi already interior-bijective: mu = id, rho = phi
  SiteMorphism phi{Site::Nabla, 3, 1, {kNegInf, 1, kPosInf}};
  REQUIRE(in_interval_class(phi));
  auto f = interval_factor(phi);
  CHECK(f.mu == identity_mor(Site::AugDelta, 1));
  CHECK(f.rho == phi);
  CHECK(compose(apply_J(f.mu), f.rho) == phi);

  // phi = J(mu): rho = id
  SiteMorphism mu{Site::AugDelta, 2, 3, {1, 3}};
  auto f2 = interval_factor(apply_J(mu));
  CHECK(f2.mu == mu);
  CHECK(is_identity(f2.rho));

  // <<2>> -> <<1>> with values (-inf, 1): rho collapses the first point
  SiteMorphism g{Site::Nabla, 2, 1, {kNegInf, 1}};
  auto f3 = interval_factor(g);
  CHECK(f3.rho.values == std::vector<Pt>{kNegInf, 1});
  CHECK(f3.rho.cod == 1);
  CHECK(f3.mu == identity_mor(Site::AugDelta, 1));

  // round-trip and uniqueness by exhaustive search
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (const auto& h : hom_set(Site::Nabla, m, n)) {
        auto fc = interval_factor(h);
        CHECK(in_interval_class(fc.rho));
        CHECK(compose(apply_J(fc.mu), fc.rho) == h);
        int count = 0;
        for (int k = 0; k <= 3; ++k)
          for (const auto& rho : hom_set(Site::Nabla, m, k)) {
            if (!in_interval_class(rho)) continue;
            for (const auto& mu2 : hom_set(Site::AugDelta, k, n))
              if (compose(apply_J(mu2), rho) == h) ++count;
          }
        CHECK(count == 1);
      }
}

TEST_CASE("mono and epi detection") {
  SiteMorphism inc{Site::AugDelta, 2, 3, {1, 3}};
  CHECK(is_mono(inc));
  CHECK(!is_epi(inc));
  SiteMorphism sur{Site::AugDelta, 3, 2, {1, 1, 2}};
  CHECK(!is_mono(sur));
  CHECK(is_epi(sur));
}

TEST_CASE("morphism json round-trip") {
  SiteMorphism f{Site::Nabla, 2, 1, {kNegInf, 1}};
  Json j = morphism_to_json(f);
  CHECK(j.dump() == R"({"site":"nabla","dom":2,"cod":1,"values":["-inf",1]})");
  CHECK(morphism_from_json(j) == f);
  CHECK_THROWS(morphism_from_json(Json::parse(R"({"site":"nabla","dom":1,"cod":1,"values":[7]})")));
}
