#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "crs/group_table.hpp"
#include "crs/site.hpp"

namespace crs {

// A degree-truncated presheaf of finite sets.
struct PresheafTable {
  Site site = Site::AugDelta;
  int max_level = 0;
  std::vector<int32_t> size;              // per level
  std::vector<std::vector<int32_t>> hoff;
  std::vector<std::vector<int32_t>> rest;  // rest[a][(hoff[a][b]+phi)*size[a] + x]

  void init_offsets();
  int hom_total(int a) const { return hoff[a][max_level + 1]; }
  int32_t restrict_el(int a, int b, int32_t phi, int32_t x) const {
    return rest[a][(static_cast<size_t>(hoff[a][b]) + phi) * size[a] + x];
  }
};

bool verify_presheaf(const PresheafTable& X, std::string* why = nullptr);
PresheafTable terminal_presheaf(Site s, int max_level);
PresheafTable underlying_presheaf(const CrossedGroupTable& G);
// The representable A[a0], with levels hom(b, a0) and restriction by
// precomposition.
PresheafTable representable_presheaf(Site s, int max_level, int a0);

bool presheaves_equal(const PresheafTable& A, const PresheafTable& B,
                      std::string* why = nullptr);

// A presheaf over a crossed group: the structure map p : X -> G is an A-set
// map, and X acts on hom-sets through p.
struct SlicedObject {
  PresheafTable X;
  const CrossedGroupTable* G = nullptr;
  std::vector<std::vector<int32_t>> p;  // per level into G

  int32_t act_on(int a, int b, int32_t x, int32_t phi) const {
    return G->act_on(a, b, p[a][x], phi);
  }
};

bool verify_sliced(const SlicedObject& X, std::string* why = nullptr);

SlicedObject unit_sliced(const CrossedGroupTable& G);
SlicedObject group_as_sliced(const CrossedGroupTable& G);  // G over itself
// A crossed subgroup table H together with a map H -> G as a sliced object.
SlicedObject sliced_from_map(const CrossedGroupMap& m);
// Representable with structure map phi |-> phi*(x0).
SlicedObject representable_sliced(const CrossedGroupTable& G, int a0, int32_t x0);

// K ⋊_G X on plain presheaves: (k, x) |-> ((phi^x)*(k), phi*(x)).
// Pair (k, x) is encoded as k*|X(a)| + x.
PresheafTable semidirect(const PresheafTable& K, const SlicedObject& X);

// X ⋊_G Y as a sliced object; structure map (x,y) |-> p(x)q(y).
SlicedObject rtimes(const SlicedObject& X, const SlicedObject& Y);

// A sliced map f : X -> Y over G (levelwise functions).
struct SlicedMap {
  const SlicedObject* src = nullptr;
  const SlicedObject* dst = nullptr;
  std::vector<std::vector<int32_t>> f;
};
bool verify_sliced_map(const SlicedMap& m, std::string* why = nullptr);

// crs_X naturality (Lemma: crs is natural in X): for a sliced map f,
// (id x f) ∘ crs_X = crs_Y ∘ (f x id) on every hom-set.
bool check_crs_naturality(const SlicedMap& m, std::string* why = nullptr);

// Monoid object in (Set^{/G}, ⋊_G).
struct MonoidTable {
  SlicedObject X;
  std::vector<int32_t> unit;               // per level
  std::vector<std::vector<int32_t>> mul;   // per level, dense
  int32_t mulxy(int a, int32_t x, int32_t y) const {
    return mul[a][static_cast<size_t>(x) * X.X.size[a] + y];
  }
};

bool verify_monoid(const MonoidTable& M, std::string* why = nullptr);

MonoidTable crossed_group_as_monoid(const CrossedGroupMap& structure);

// The group of invertible elements J(M) as a crossed group over M's base;
// closure under restriction comes from phi*(x)^{-1} = (phi^x)*(x^{-1}).
struct Invertibles {
  CrossedGroupTable table;
  std::vector<std::vector<int32_t>> element_of;  // table index -> M index
  CrossedGroupMap structure;                     // J(M) -> G
};
Invertibles invertibles(const MonoidTable& M);

// Thrown when a word operation would exceed the configured cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The free crossed monoid on X, truncated at words of length <= cap.
// Words restrict by (phi^{p(x_2)...p(x_n)})*(x_1) ... phi*(x_n).
struct FreeCrossedMonoid {
  const SlicedObject* X = nullptr;
  int cap = 1;

  using Word = std::vector<int32_t>;  // letters in X(a), left to right

  Word unit() const { return {}; }
  Word concat(const Word& u, const Word& v) const;      // throws CapExceeded
  Word restrict_word(int a, int b, int32_t phi, const Word& w) const;
  int32_t structure(int a, const Word& w) const;        // product of p(letters)
  int64_t count_words(int a) const;                     // sum |X(a)|^k, k<=cap
};

}  // namespace crs
