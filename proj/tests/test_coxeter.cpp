#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "coxkl/errors.hpp"
#include "coxkl/finite_group.hpp"
#include "coxkl/hat.hpp"
#include "support.hpp"

using namespace coxkl;
using namespace coxkl::testing;

namespace {

// Symmetric group oracle: s_i swaps positions i and i+1.
using Perm = std::vector<int>;

Perm perm_of(const Word& w, int n) {
  Perm p(n + 1);
  std::iota(p.begin(), p.end(), 1);
  for (Gen g : w) std::swap(p[g], p[g + 1]);
  return p;
}

int inversion_count(const Perm& p) {
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) c += p[i] > p[j];
  return c;
}

// Tableau criterion: x <= y iff for every k the sorted prefixes of x are
// entrywise at most those of y.
bool perm_bruhat(const Perm& x, const Perm& y) {
  for (std::size_t k = 1; k <= x.size(); ++k) {
    std::vector<int> a(x.begin(), x.begin() + k), b(y.begin(), y.begin() + k);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < k; ++i)
      if (a[i] > b[i]) return false;
  }
  return true;
}

// Subword property over one reduced word of y.
bool subword_bruhat(const CoxeterSystem& W, const Element& x, const Element& y) {
  const Word& w = y.word();
  const std::size_t n = w.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != static_cast<unsigned>(x.length())) continue;
    Word sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) sub.push_back(w[i]);
    if (W.reduce(sub) == x) return true;
  }
  return false;
}

// Geometric representation in floating point; elements are identified by
// their rounded matrices.
struct FloatGroup {
  explicit FloatGroup(const CoxeterSystem& W) : n(W.rank()), B(n * n) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int m = W.bond(i, j);
        B[i * n + j] = i == j ? 1.0 : m == kInfinity ? -1.0 : -std::cos(M_PI / m);
      }
  }
  // M * sigma_s, where sigma_s(e_k) = e_k - 2 B(s,k) e_s.
  std::vector<double> apply(const std::vector<double>& M, Gen s) const {
    std::vector<double> out(M);
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) out[r * n + k] = M[r * n + k] - 2.0 * B[s * n + k] * M[r * n + s];
    return out;
  }
  static std::vector<long> key(const std::vector<double>& M) {
    std::vector<long> k(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) k[i] = std::lround(M[i] * 1e6);
    return k;
  }
  int n;
  std::vector<double> B;
};

}  // namespace

TEST_CASE("reduce and the group operations on A2") {
  auto W = type_a(2);
  CHECK(el(*W, "s1,s1").is_identity());
  CHECK(W->reduce_names({"s1", "s2", "s1", "s2"}) == el(*W, "s2,s1"));
  CHECK(el(*W, "s1,s2").length() == 2);
  CHECK(W->mul(el(*W, "s1"), el(*W, "s1")).is_identity());
  CHECK(W->inv(el(*W, "s1,s2")) == el(*W, "s2,s1"));
  const Element x = W->mul(el(*W, "s1,s2"), el(*W, "s1"));
  CHECK(x == el(*W, "s2,s1,s2"));
  CHECK(x.length() == 3);
  CHECK(W->format(x) == "s1,s2,s1");
  CHECK(W->format(W->identity()) == "1");
  CHECK(W->format_compact(x) == "s1s2s1");
}

TEST_CASE("descents") {
  auto W = type_a(3);
  CHECK(W->descents(W->identity(), Side::Left).empty());
  CHECK(W->descents(el(*W, "s1,s2"), Side::Left) == GenSet::single(0));
  CHECK(W->descents(el(*W, "s1,s2"), Side::Right) == GenSet::single(1));
  auto A2 = type_a(2);
  CHECK(A2->descents(el(*A2, "s1,s2,s1"), Side::Left) == A2->all());
}

TEST_CASE("inversions") {
  auto W = dihedral(3);
  CHECK(W->inversions(W->identity()).empty());
  auto n_s = W->inversions(el(*W, "s"));
  REQUIRE(n_s.size() == 1);
  CHECK(n_s[0].element == el(*W, "s"));
  std::set<Element> n_st;
  for (const auto& t : W->inversions(el(*W, "st"))) n_st.insert(t.element);
  CHECK(n_st == std::set<Element>{el(*W, "s"), el(*W, "sts")});
  CHECK(W->is_reflection(el(*W, "sts")));
  CHECK_FALSE(W->is_reflection(el(*W, "st")));
}

TEST_CASE("bruhat examples") {
  auto W = dihedral(3);
  for (const auto& x : W->enumerate(W->all(), CosetKind::Parabolic)) CHECK(W->bruhat_leq(W->identity(), x));
  CHECK(W->bruhat_leq(el(*W, "s"), el(*W, "ts")));
  CHECK_FALSE(W->bruhat_leq(el(*W, "st"), el(*W, "ts")));
}

TEST_CASE("coset decompositions") {
  auto W = type_a(2);
  const GenSet I = GenSet::single(0);
  auto check = [&](const char* x, const char* u, const char* v) {
    auto [a, b] = W->coset_decompose(el(*W, x), I);
    CHECK(a == el(*W, u));
    CHECK(b == el(*W, v));
  };
  check("s1", "1", "s1");
  check("s1,s2", "s1,s2", "1");
  check("s2,s1", "s2", "s1");

  // Uniqueness and length additivity over all subsets of B3.
  auto B3 = linear({3, 4});
  const auto group = B3->enumerate(B3->all(), CosetKind::Parabolic);
  for (std::uint64_t bits = 0; bits < 8; ++bits) {
    const GenSet J(bits);
    std::map<Element, int> hits;
    for (const auto& x : group) {
      auto [u, v] = B3->coset_decompose(x, J);
      CHECK(B3->in_quotient(u, J));
      CHECK(B3->in_parabolic(v, J));
      CHECK(u.length() + v.length() == x.length());
      CHECK(B3->mul(u, v) == x);
      ++hits[u];
      auto [p, q] = B3->left_coset_decompose(x, J);
      CHECK(B3->in_parabolic(p, J));
      CHECK((B3->descents(q, Side::Left) & J).empty());
      CHECK(B3->mul(p, q) == x);
    }
    const std::size_t parabolic = B3->enumerate(J, CosetKind::Parabolic).size();
    CHECK(hits.size() == B3->enumerate(J, CosetKind::MinimalLeft).size());
    for (const auto& [u, count] : hits) CHECK(count == static_cast<int>(parabolic));
  }
}

TEST_CASE("longest elements") {
  auto W = type_a(2);
  CHECK(W->longest_element(GenSet()).is_identity());
  CHECK(W->longest_element() == el(*W, "s1,s2,s1"));
  auto inf = dihedral(kInfinity);
  CHECK_THROWS_AS(inf->longest_element(), InfiniteGroupError);
  CHECK(linear({3, 4})->longest_element().length() == 9);
  CHECK(system_file("h3")->longest_element().length() == 15);
}

TEST_CASE("enumeration counts") {
  auto A1 = a1();
  auto e = A1->enumerate(A1->all(), CosetKind::Parabolic);
  REQUIRE(e.size() == 2);
  CHECK(e[0].is_identity());
  CHECK(e[1] == el(*A1, "s"));

  auto A2 = type_a(2);
  CHECK(A2->enumerate(A2->all(), CosetKind::Parabolic).size() == 6);
  auto q = A2->enumerate(GenSet::single(0), CosetKind::MinimalLeft);
  CHECK(q == std::vector<Element>{A2->identity(), el(*A2, "s2"), el(*A2, "s1,s2")});

  CHECK(system_file("h3")->enumerate(GenSet::first(3), CosetKind::Parabolic).size() == 120);
  auto F4 = linear({3, 4, 3});
  CHECK(F4->enumerate(F4->all(), CosetKind::Parabolic).size() == 1152);
  auto I7 = dihedral(7);
  CHECK(I7->enumerate(I7->all(), CosetKind::Parabolic).size() == 14);

  auto inf = dihedral(kInfinity);
  CHECK_THROWS_AS(inf->enumerate(inf->all(), CosetKind::Parabolic), InfiniteGroupError);
  auto bounded = inf->enumerate(inf->all(), CosetKind::Parabolic, 4);
  CHECK(bounded.size() == 9);
  CHECK_FALSE(inf->is_finite());
  CHECK(inf->is_finite(GenSet::single(0)));
}

TEST_CASE("finite types") {
  CHECK(type_a(4)->finite_type(GenSet::first(4)) == std::optional<std::string>("A4"));
  CHECK(linear({3, 4, 3})->finite_type(GenSet::first(4)) == std::optional<std::string>("F4"));
  CHECK(system_file("h3")->finite_type(GenSet::first(3)) == std::optional<std::string>("H3"));
  CHECK(type_a(3)->finite_type(GenSet(0b101)) == std::optional<std::string>("A1xA1"));
  CHECK_FALSE(system_file("a2affine")->finite_type(GenSet::first(3)).has_value());
}

TEST_CASE("permutation oracle on A3 and A4") {
  for (int n : {3, 4}) {
    auto W = type_a(n);
    const auto group = W->enumerate(W->all(), CosetKind::Parabolic);
    std::set<Perm> perms;
    for (const auto& x : group) {
      const Perm p = perm_of(x.word(), n);
      CHECK(inversion_count(p) == x.length());
      perms.insert(p);
    }
    CHECK(perms.size() == group.size());

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> gen(0, n - 1), len(0, 14);
    for (int trial = 0; trial < 300; ++trial) {
      Word w(len(rng));
      for (auto& g : w) g = static_cast<Gen>(gen(rng));
      const Element x = W->reduce(w);
      CHECK(perm_of(x.word(), n) == perm_of(w, n));
      CHECK(x.length() == inversion_count(perm_of(w, n)));
    }
  }
  auto W = type_a(3);
  const auto group = W->enumerate(W->all(), CosetKind::Parabolic);
  for (const auto& x : group)
    for (const auto& y : group)
      CHECK(W->bruhat_leq(x, y) == perm_bruhat(perm_of(x.word(), 3), perm_of(y.word(), 3)));
}

TEST_CASE("subword oracle for Bruhat order") {
  std::vector<std::unique_ptr<CoxeterSystem>> systems;
  systems.push_back(linear({4}));
  systems.push_back(linear({6}));
  systems.push_back(linear({3, 4}));
  systems.push_back(system_file("h3"));
  for (const auto& W : systems) {
    const auto group = W->enumerate(W->all(), CosetKind::Parabolic);
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
    const std::size_t trials = group.size() <= 48 ? group.size() * group.size() : 400;
    for (std::size_t t = 0; t < trials; ++t) {
      const Element& x = group.size() <= 48 ? group[t / group.size()] : group[pick(rng)];
      const Element& y = group.size() <= 48 ? group[t % group.size()] : group[pick(rng)];
      CHECK(W->bruhat_leq(x, y) == subword_bruhat(*W, x, y));
    }
  }
}

TEST_CASE("floating point Cayley graph of H3") {
  auto W = system_file("h3");
  FloatGroup G(*W);
  const int n = W->rank();
  std::vector<double> I(n * n, 0.0);
  for (int i = 0; i < n; ++i) I[i * n + i] = 1.0;
  std::map<std::vector<long>, Word> seen{{FloatGroup::key(I), {}}};
  std::vector<std::pair<std::vector<double>, Word>> frontier{{I, {}}};
  std::map<int, int> by_length{{0, 1}};
  for (int depth = 1; !frontier.empty(); ++depth) {
    std::vector<std::pair<std::vector<double>, Word>> next;
    for (const auto& [M, w] : frontier)
      for (Gen s = 0; s < n; ++s) {
        auto M2 = G.apply(M, s);
        auto k = FloatGroup::key(M2);
        if (seen.count(k)) continue;
        Word w2 = w;
        w2.push_back(s);
        seen.emplace(k, w2);
        ++by_length[depth];
        next.emplace_back(std::move(M2), std::move(w2));
      }
    frontier = std::move(next);
  }
  CHECK(seen.size() == 120);
  std::set<Element> elems;
  for (const auto& [k, w] : seen) {
    const Element x = W->reduce(w);
    CHECK(x.length() == static_cast<int>(w.size()));
    elems.insert(x);
  }
  CHECK(elems.size() == 120);
  std::map<int, int> ours;
  for (const auto& x : W->enumerate(W->all(), CosetKind::Parabolic)) ++ours[x.length()];
  CHECK(ours == by_length);
}

TEST_CASE("inversion cocycle and root supports") {
  auto W = linear({3, 4});
  const auto group = W->enumerate(W->all(), CosetKind::Parabolic);
  auto inv_set = [&](const Element& x) {
    std::set<Element> out;
    for (const auto& t : W->inversions(x)) out.insert(t.element);
    return out;
  };
  for (const auto& x : group) {
    CHECK(inv_set(x).size() == static_cast<std::size_t>(x.length()));
    for (Gen s = 0; s < W->rank(); ++s) {
      // N(x s) = N(x) symmetric difference {x s x^-1}
      std::set<Element> expected = inv_set(x);
      const Element t = W->mul(W->right_mul(x, s), W->inv(x));
      if (!expected.erase(t)) expected.insert(t);
      CHECK(inv_set(W->right_mul(x, s)) == expected);
    }
  }
  auto D = dihedral(3);
  CHECK(D->reflection_support(D->reflection(el(*D, "s"))) == GenSet::single(0));
  CHECK(D->reflection_support(D->reflection(el(*D, "sts"))) == D->all());

  auto A2 = type_a(2);
  HatSystem h(*A2);
  const CoxeterSystem& H = h.hat();
  const Element t1 = H.generator(h.theta(0));
  CHECK(H.reflection_support(H.reflection(t1)) == GenSet::single(h.theta(0)));
}

TEST_CASE("validation errors") {
  auto W = type_a(2);
  CHECK_THROWS_AS(W->reduce_names({"s1", "x"}), std::invalid_argument);
  CHECK_THROWS_AS(W->generator_index("q"), std::invalid_argument);
  CHECK_THROWS(CoxeterSystem({"a", "b"}, {{1, 3}, {4, 1}}));
  CHECK_THROWS(CoxeterSystem({"a", "b"}, {{2, 3}, {3, 1}}));
  CHECK_THROWS(CoxeterSystem({"a", "b"}, {{1, 1}, {1, 1}}));
  CHECK_THROWS(CoxeterSystem({"a", "a"}, {{1, 3}, {3, 1}}));
  auto other = type_a(2);
  CHECK_THROWS(W->mul(el(*W, "s1"), el(*other, "s1")));
}

TEST_CASE("finite group index agrees with the system") {
  auto W = linear({3, 4});
  FiniteCoxeterGroup G(*W);
  CHECK(G.size() == 48);
  CHECK(G.element(G.longest()) == W->longest_element());
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, G.size() - 1);
  for (int t = 0; t < 500; ++t) {
    const auto i = static_cast<FiniteCoxeterGroup::Index>(pick(rng));
    const auto j = static_cast<FiniteCoxeterGroup::Index>(pick(rng));
    CHECK(G.element(G.mul(i, j)) == W->mul(G.element(i), G.element(j)));
    CHECK(G.element(G.inv(i)) == W->inv(G.element(i)));
    CHECK(G.leq(i, j) == W->bruhat_leq(G.element(i), G.element(j)));
  }
  CHECK(G.reflections().size() == 9);
  CHECK_THROWS_AS(FiniteCoxeterGroup(*dihedral(kInfinity)), InfiniteGroupError);
}
