#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "crs/families.hpp"
#include "crs/free_product.hpp"
#include "crs/subgroup.hpp"

using namespace crs;

namespace {

// Fixtures built from small shipped families; a trivial amalgam keeps the
// degenerate cases honest, the dihedral one exercises the H-moves.
struct Fixture {
  CrossedGroupTable g1, g2, h;
  CrossedGroupMap f1, f2;
};

Fixture make_trivial_amalgam(CrossedGroupTable a, CrossedGroupTable b) {
  Fixture fx;
  fx.g1 = std::move(a);
  fx.g2 = std::move(b);
  fx.h = trivial_table(fx.g1.site, fx.g1.max_level);
  fx.f1.src = &fx.h;
  fx.f1.dst = &fx.g1;
  fx.f2.src = &fx.h;
  fx.f2.dst = &fx.g2;
  fx.f1.f.resize(fx.h.max_level + 1);
  fx.f2.f.resize(fx.h.max_level + 1);
  for (int lvl = 0; lvl <= fx.h.max_level; ++lvl) {
    fx.f1.f[lvl] = {fx.g1.lvl[lvl].unit};
    fx.f2.f[lvl] = {fx.g2.lvl[lvl].unit};
  }
  return fx;
}

bool word_less(const AmalgamWord& a, const AmalgamWord& b) {
  auto ka = std::make_tuple(a.level, a.tail, a.sylls.size());
  auto kb = std::make_tuple(b.level, b.tail, b.sylls.size());
  if (ka != kb) return ka < kb;
  for (size_t i = 0; i < a.sylls.size(); ++i) {
    auto sa = std::make_pair(a.sylls[i].side, a.sylls[i].g);
    auto sb = std::make_pair(b.sylls[i].side, b.sylls[i].g);
    if (sa != sb) return sa < sb;
  }
  return false;
}
using WordSet = std::set<AmalgamWord, decltype(&word_less)>;

// Brute-force congruence closure on raw words of bounded length: unit
// insertion/deletion, multiplicativity merges, and H-invariance moves.
struct CongruenceOracle {
  const FreeProduct& fp;
  const CrossedGroupMap &m1, &m2;
  int level, cap;
  std::vector<std::vector<Syllable>> words;
  std::map<std::vector<Syllable>, int> index;
  std::vector<int> parent;

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  bool merge(size_t wi, const std::vector<Syllable>& w2) {
    auto it = index.find(w2);
    if (it == index.end()) return false;
    const int a = find(static_cast<int>(wi)), b = find(it->second);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }

  CongruenceOracle(const FreeProduct& f, const CrossedGroupMap& a1, const CrossedGroupMap& a2,
                   int lvl, int wcap)
      : fp(f), m1(a1), m2(a2), level(lvl), cap(wcap) {
    std::vector<Syllable> alphabet;
    for (int32_t g = 0; g < fp.g(0).order(level); ++g) alphabet.push_back({0, g});
    for (int32_t g = 0; g < fp.g(1).order(level); ++g) alphabet.push_back({1, g});
    std::vector<std::vector<Syllable>> frontier = {{}};
    for (int len = 0; len <= cap; ++len) {
      std::vector<std::vector<Syllable>> next;
      for (auto& w : frontier) {
        index[w] = static_cast<int>(words.size());
        words.push_back(w);
        if (len < cap)
          for (const auto& s : alphabet) {
            auto w2 = w;
            w2.push_back(s);
            next.push_back(std::move(w2));
          }
      }
      frontier = std::move(next);
    }
    parent.resize(words.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto fval = [&](int side, int32_t hh) { return side ? m2.f[level][hh] : m1.f[level][hh]; };
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t wi = 0; wi < words.size(); ++wi) {
        const auto& w = words[wi];
        for (size_t i = 0; i < w.size(); ++i)
          if (w[i].g == fp.g(w[i].side).lvl[level].unit) {
            auto w2 = w;
            w2.erase(w2.begin() + i);
            changed |= merge(wi, w2);
          }
        for (size_t i = 0; i + 1 < w.size(); ++i)
          if (w[i].side == w[i + 1].side) {
            auto w2 = w;
            w2[i].g = fp.g(w[i].side).lvl[level].mulxy(w[i].g, w[i + 1].g);
            w2.erase(w2.begin() + i + 1);
            changed |= merge(wi, w2);
          }
        for (size_t i = 0; i + 1 < w.size(); ++i)
          for (int32_t hh = 0; hh < fp.h().order(level); ++hh) {
            auto w2 = w;
            const int sj = w[i].side, sj2 = w[i + 1].side;
            w2[i].g = fp.g(sj).lvl[level].mulxy(w[i].g,
                                                fp.g(sj).lvl[level].invx(fval(sj, hh)));
            w2[i + 1].g = fp.g(sj2).lvl[level].mulxy(fval(sj2, hh), w[i + 1].g);
            changed |= merge(wi, w2);
          }
      }
    }
  }
};

}  // namespace

TEST_CASE("degenerate free products") {
  Fixture fx = make_trivial_amalgam(sym_table(Site::AugDelta, 2),
                                    trivial_table(Site::AugDelta, 2));
  FreeProduct fp(fx.f1, fx.f2, 4);
  for (int lvl = 0; lvl <= 2; ++lvl) {
    WordSet seen(&word_less);
    for (int32_t g = 0; g < fx.g1.order(lvl); ++g) {
      AmalgamWord w = fp.embed(0, lvl, g);
      CHECK(w.sylls.size() <= 1);
      seen.insert(w);
    }
    CHECK(seen.size() == static_cast<size_t>(fx.g1.order(lvl)));
  }
  Fixture fx2 = make_trivial_amalgam(trivial_table(Site::AugDelta, 2),
                                     trivial_table(Site::AugDelta, 2));
  FreeProduct fp2(fx2.f1, fx2.f2, 4);
  CHECK(fp2.embed(0, 2, 0) == fp2.unit(2));
  CHECK(fp2.embed(1, 2, 0) == fp2.unit(2));
}

TEST_CASE("group laws on reduced words up to the cap") {
  Fixture fx = make_trivial_amalgam(cyc_table(2), dihedral_table(2));
  FreeProduct fp(fx.f1, fx.f2, 6);
  const int lvl = 2;
  std::vector<AmalgamWord> ws;
  for (int32_t a = 0; a < fx.g1.order(lvl); ++a)
    for (int32_t b = 0; b < fx.g2.order(lvl); ++b)
      ws.push_back(fp.mul(fp.embed(0, lvl, a), fp.embed(1, lvl, b)));
  for (const auto& u : ws) {
    CHECK(fp.mul(u, fp.unit(lvl)) == u);
    CHECK(fp.mul(fp.unit(lvl), u) == u);
    CHECK(fp.mul(u, fp.inverse(u)) == fp.unit(lvl));
    CHECK(fp.mul(fp.inverse(u), u) == fp.unit(lvl));
  }
  for (const auto& u : ws)
    for (const auto& v : ws)
      for (const auto& w : ws)
        CHECK(fp.mul(fp.mul(u, v), w) == fp.mul(u, fp.mul(v, w)));
}

TEST_CASE("canonical injections are injective and natural") {
  Fixture fx = make_trivial_amalgam(cyc_table(3), dihedral_table(3));
  FreeProduct fp(fx.f1, fx.f2, 4);
  for (int lvl = 0; lvl <= 3; ++lvl)
    for (int side = 0; side < 2; ++side) {
      WordSet seen(&word_less);
      for (int32_t g = 0; g < fp.g(side).order(lvl); ++g) seen.insert(fp.embed(side, lvl, g));
      CHECK(seen.size() == static_cast<size_t>(fp.g(side).order(lvl)));
    }
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      const int H = homs(Site::AugDelta, b, a).size();
      for (int32_t p = 0; p < H; ++p)
        for (int side = 0; side < 2; ++side)
          for (int32_t g = 0; g < fp.g(side).order(a); ++g) {
            AmalgamWord lhs = fp.restrict_nf(b, p, fp.embed(side, a, g));
            AmalgamWord rhs = fp.embed(side, b, fp.g(side).restrict_el(a, b, p, g));
            CHECK(lhs == rhs);
          }
    }
}

TEST_CASE("the recursive restriction formula, one unrolling") {
  Fixture fx = make_trivial_amalgam(cyc_table(3), dihedral_table(3));
  FreeProduct fp(fx.f1, fx.f2, 4);
  const int a = 3, b = 2;
  const int H = homs(Site::AugDelta, b, a).size();
  for (int32_t p = 0; p < H; ++p)
    for (int32_t x1 = 1; x1 < fx.g1.order(a); ++x1)
      for (int32_t x2 = 1; x2 < fx.g2.order(a); ++x2) {
        std::vector<Syllable> raw = {{0, x1}, {1, x2}};
        AmalgamWord lhs = fp.restrict_word(a, b, p, raw);
        const int32_t phi_x2 = fx.g2.act_on(a, b, x2, p);
        std::vector<Syllable> expect = {{0, fx.g1.restrict_el(a, b, phi_x2, x1)},
                                        {1, fx.g2.restrict_el(a, b, p, x2)}};
        CHECK(lhs == fp.reduce(b, expect));
      }
}

TEST_CASE("restriction is independent of the representative word") {
  Fixture fx = make_trivial_amalgam(cyc_table(2), dihedral_table(2));
  FreeProduct fp(fx.f1, fx.f2, 6);
  const int a = 2;
  std::vector<Syllable> alphabet;
  for (int32_t g = 0; g < fx.g1.order(a); ++g) alphabet.push_back({0, g});
  for (int32_t g = 0; g < fx.g2.order(a); ++g) alphabet.push_back({1, g});
  std::map<std::vector<Syllable>, std::vector<std::vector<Syllable>>> classes;
  std::vector<std::vector<Syllable>> frontier = {{}};
  for (int len = 0; len <= 3; ++len) {
    for (const auto& w : frontier) {
      AmalgamWord nf = fp.reduce(a, w);
      auto key = fp.raw_of(nf);
      classes[key].push_back(w);
    }
    std::vector<std::vector<Syllable>> next;
    for (const auto& w : frontier)
      for (const auto& s : alphabet) {
        auto w2 = w;
        w2.push_back(s);
        next.push_back(std::move(w2));
      }
    frontier = std::move(next);
  }
  for (int b = 0; b <= 2; ++b) {
    const int H = homs(Site::AugDelta, b, a).size();
    for (int32_t p = 0; p < H; ++p)
      for (const auto& [key, reps] : classes) {
        const AmalgamWord base = fp.restrict_word(a, b, p, reps.front());
        for (const auto& r : reps) CHECK(fp.restrict_word(a, b, p, r) == base);
      }
  }
}

TEST_CASE("normal forms agree with the bounded congruence-closure oracle") {
  Fixture fx = make_trivial_amalgam(cyc_table(2), dihedral_table(2));
  FreeProduct fp(fx.f1, fx.f2, 4);
  for (int lvl = 1; lvl <= 2; ++lvl) {
    CongruenceOracle oc(fp, fx.f1, fx.f2, lvl, 4);
    // congruent words share a normal form; distinct normal forms are distinct
    // group elements (no collapse beyond the stated relations)
    std::map<int, std::vector<size_t>> byclass;
    for (size_t i = 0; i < oc.words.size(); ++i) byclass[oc.find((int)i)].push_back(i);
    for (const auto& [cls, idxs] : byclass) {
      const AmalgamWord nf = fp.reduce(lvl, oc.words[idxs.front()]);
      for (size_t i : idxs) CHECK(fp.reduce(lvl, oc.words[i]) == nf);
    }
    // and conversely: same normal form implies congruent within the bound
    for (const auto& [cls1, idx1] : byclass)
      for (const auto& [cls2, idx2] : byclass) {
        if (cls1 >= cls2) continue;
        CHECK(fp.reduce(lvl, oc.words[idx1.front()]) != fp.reduce(lvl, oc.words[idx2.front()]));
      }
  }
}

TEST_CASE("a nontrivial amalgam: the reflexive C2 inside two dihedral copies") {
  CrossedGroupTable d1 = dihedral_table(2), d2 = dihedral_table(2);
  CrossedGroupTable w = weyl_table(Site::AugDelta, 2);
  const int32_t r = w.lvl[1].index_of(perm_identity(1), 1);
  SubgroupFamily refl = generated_subgroup(w, {{1, r}});
  CrossedGroupTable h = subtable(w, refl);
  auto embed_refl = [&](CrossedGroupTable& d) {
    CrossedGroupMap m;
    m.src = &h;
    m.dst = &d;
    m.f.resize(3);
    for (int a = 0; a <= 2; ++a)
      for (int32_t i = 0; i < h.order(a); ++i) {
        const WeylElem& e = h.lvl[a].elems[i];
        const int32_t target = d.lvl[a].index_of(e.perm, e.signs);
        REQUIRE(target >= 0);
        m.f[a].push_back(target);
      }
    return m;
  };
  CrossedGroupMap m1 = embed_refl(d1), m2 = embed_refl(d2);
  REQUIRE(verify_map(m1).ok);
  REQUIRE(verify_map(m2).ok);
  FreeProduct fp(m1, m2, 5);
  const int lvl = 2;
  int nontrivial_pairs = 0;
  for (int32_t x1 = 0; x1 < d1.order(lvl); ++x1)
    for (int32_t x2 = 0; x2 < d2.order(lvl); ++x2)
      if (fp.reduce(lvl, {{0, x1}, {1, x2}}).sylls.size() == 2) ++nontrivial_pairs;
  CHECK(nontrivial_pairs > 0);
  AmalgamWord u = fp.reduce(lvl, {{0, 1}, {1, 2}});
  CHECK(fp.mul(u, fp.inverse(u)) == fp.unit(lvl));
  // H-invariance: inserting f1(h)^{-1} f2(h) does not change the class, nor
  // the restriction computed from either representative
  for (int b = 0; b <= 2; ++b) {
    const int H = homs(Site::AugDelta, b, lvl).size();
    for (int32_t p = 0; p < H; ++p)
      for (int32_t x1 = 0; x1 < d1.order(lvl); ++x1)
        for (int32_t hh = 0; hh < h.order(lvl); ++hh)
          for (int32_t x2 = 0; x2 < d2.order(lvl); ++x2) {
            const int32_t a1 = d1.lvl[lvl].mulxy(x1, d1.lvl[lvl].invx(m1.f[lvl][hh]));
            const int32_t a2 = d2.lvl[lvl].mulxy(m2.f[lvl][hh], x2);
            CHECK(fp.reduce(lvl, {{0, x1}, {1, x2}}) == fp.reduce(lvl, {{0, a1}, {1, a2}}));
            CHECK(fp.restrict_word(lvl, b, p, {{0, x1}, {1, x2}}) ==
                  fp.restrict_word(lvl, b, p, {{0, a1}, {1, a2}}));
          }
  }
  // oracle comparison for the amalgamated case as well
  CongruenceOracle oc(fp, m1, m2, 1, 4);
  std::map<int, std::vector<size_t>> byclass;
  for (size_t i = 0; i < oc.words.size(); ++i) byclass[oc.find((int)i)].push_back(i);
  for (const auto& [cls, idxs] : byclass) {
    const AmalgamWord nf = fp.reduce(1, oc.words[idxs.front()]);
    for (size_t i : idxs) CHECK(fp.reduce(1, oc.words[i]) == nf);
  }
  for (const auto& [cls1, idx1] : byclass)
    for (const auto& [cls2, idx2] : byclass) {
      if (cls1 >= cls2) continue;
      CHECK(fp.reduce(1, oc.words[idx1.front()]) != fp.reduce(1, oc.words[idx2.front()]));
    }
}

TEST_CASE("non-injective amalgamation is rejected") {
  CrossedGroupTable c = cyc_table(2);
  CrossedGroupTable t = trivial_table(Site::AugDelta, 2);
  CrossedGroupMap collapse;
  collapse.src = &c;
  collapse.dst = &t;
  collapse.f.resize(3);
  for (int a = 0; a <= 2; ++a) collapse.f[a].assign(c.order(a), 0);
  CrossedGroupMap other = collapse;
  CHECK_THROWS_AS(FreeProduct(collapse, other, 4), std::invalid_argument);
}

TEST_CASE("word cap overflow is an explicit error") {
  Fixture fx = make_trivial_amalgam(cyc_table(2), dihedral_table(2));
  FreeProduct fp(fx.f1, fx.f2, 2);
  const int lvl = 2;
  AmalgamWord u = fp.reduce(lvl, {{0, 1}, {1, 2}});
  REQUIRE(u.sylls.size() == 2);
  CHECK_THROWS_AS(fp.mul(u, u), WordCapExceeded);
}
