#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "coxkl/springer.hpp"
#include "support.hpp"

using namespace coxkl;
using namespace coxkl::testing;

namespace {

VElement vel(const CoxeterSystem& W, const std::string& text) { return parse_velement(W, text); }

LaurentPoly abar(int n) { return LaurentPoly::abar_power(n); }

// The first generating relation, then the second by brute-force search for c.
bool leq1_oracle(const CoxeterSystem& W, const VElement& w, const VElement& v) {
  return w.I().is_subset_of(v.I()) && W.bruhat_leq(v.a(), w.a()) && W.bruhat_leq(w.b(), v.b());
}

bool leq2_oracle(const CoxeterSystem& W, const VElement& w, const VElement& v) {
  if (!w.I().is_subset_of(v.I())) return false;
  for (const auto& c : W.enumerate(v.I(), CosetKind::Parabolic))
    if (W.mul(v.b(), c) == w.b() && w.b().length() == v.b().length() + c.length() && W.bruhat_leq(W.mul(v.a(), c), w.a()))
      return true;
  return false;
}

std::vector<std::vector<bool>> closure(const CoxeterSystem& W, const std::vector<VElement>& E) {
  const std::size_t n = E.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) le[i][j] = i == j || leq1_oracle(W, E[i], E[j]) || leq2_oracle(W, E[i], E[j]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (std::size_t j = 0; j < n; ++j) le[i][j] = le[i][j] || le[k][j];
  return le;
}

// Hall's theorem: mu(w,v) = sum over chains w = x0 < ... < xk = v of (-1)^k.
long mobius_by_chains(const std::vector<std::vector<bool>>& le, std::size_t w, std::size_t v) {
  const std::size_t n = le.size();
  std::map<std::size_t, long> memo;
  std::function<long(std::size_t)> signed_chains = [&](std::size_t x) -> long {
    if (x == v) return 1;
    if (auto it = memo.find(x); it != memo.end()) return it->second;
    long total = 0;
    for (std::size_t y = 0; y < n; ++y)
      if (y != x && le[x][y] && le[y][v]) total -= signed_chains(y);
    return memo[x] = total;
  };
  return signed_chains(w);
}

}  // namespace

TEST_CASE("dimension and action on A1") {
  auto W = system_file("a1");
  CHECK(v_dim(vel(*W, "[S;1;s]")) == 2);
  CHECK(v_dim(vel(*W, "[∅;1;1]")) == 0);
  CHECK(v_dim(vel(*W, "[∅;s;1]")) == -1);
  const Gen s = 0;
  CHECK(v_act({Side::Left, s}, vel(*W, "[∅;1;1]")) == vel(*W, "[∅;s;1]"));
  CHECK(v_act({Side::Left, s}, vel(*W, "[S;1;1]")) == vel(*W, "[S;1;s]"));
  CHECK(v_act({Side::Right, s}, vel(*W, "[∅;1;1]")) == vel(*W, "[∅;1;s]"));
  CHECK_THROWS_AS(VElement(W->all(), el(*W, "s"), W->identity()), std::invalid_argument);
  CHECK(format(vel(*W, "[∅;s;1]")) == "[I={}; a=s; b=1]");
}

TEST_CASE("Hecke action on A1") {
  auto W = system_file("a1");
  const ModuleElement right_top = hecke_act({Side::Right, 0}, ModuleElement{{vel(*W, "[S;1;1]"), LaurentPoly::one()}});
  CHECK(right_top == ModuleElement{{vel(*W, "[S;1;s]"), LaurentPoly::one()}});
  const ModuleElement back = hecke_act({Side::Right, 0}, ModuleElement{{vel(*W, "[S;1;s]"), LaurentPoly::one()}});
  CHECK(back == ModuleElement{{vel(*W, "[S;1;1]"), LaurentPoly::one()}, {vel(*W, "[S;1;s]"), LaurentPoly::alpha()}});
  // d rises from -1 to 0, so no alpha term.
  const ModuleElement up = hecke_act({Side::Left, 0}, ModuleElement{{vel(*W, "[∅;s;1]"), LaurentPoly::one()}});
  CHECK(up == ModuleElement{{vel(*W, "[∅;1;1]"), LaurentPoly::one()}});
  const ModuleElement down = hecke_act({Side::Left, 0}, ModuleElement{{vel(*W, "[∅;1;1]"), LaurentPoly::one()}});
  CHECK(down == ModuleElement{{vel(*W, "[∅;s;1]"), LaurentPoly::one()}, {vel(*W, "[∅;1;1]"), LaurentPoly::alpha()}});
}

TEST_CASE("b-tilde examples on A1") {
  auto W = system_file("a1");
  SpringerPoset V(*W);
  CHECK(V.elements().size() == 6);
  CHECK(V.b_poly(vel(*W, "[∅;1;1]"), vel(*W, "[S;1;1]")) == abar(1));
  CHECK(V.b_poly(vel(*W, "[∅;1;s]"), vel(*W, "[S;1;1]")).is_zero());
  CHECK(V.b_poly(vel(*W, "[∅;1;1]"), vel(*W, "[S;1;s]")) == abar(2));
  CHECK(V.b_poly(vel(*W, "[∅;s;1]"), vel(*W, "[S;1;s]")) == abar(3) + abar(1));
  for (const auto& v : V.elements()) CHECK(V.b_poly(v, v) == LaurentPoly::one());
}

TEST_CASE("generating relations on A1") {
  auto W = system_file("a1");
  SpringerPoset V(*W);
  CHECK(V.leq1(vel(*W, "[∅;s;1]"), vel(*W, "[∅;1;1]")));
  CHECK(V.leq2(vel(*W, "[∅;s;s]"), vel(*W, "[S;1;1]")));
  CHECK_FALSE(V.leq(vel(*W, "[∅;1;s]"), vel(*W, "[S;1;1]")));
}

TEST_CASE("intervals on A1") {
  auto W = system_file("a1");
  SpringerPoset V(*W);
  const auto top = vel(*W, "[S;1;1]");
  CHECK(V.interval(top, top) == std::vector<VElement>{top});
  CHECK(V.interval(vel(*W, "[∅;1;1]"), top) == std::vector<VElement>{vel(*W, "[∅;1;1]"), top});
  CHECK(V.interval(vel(*W, "[∅;s;1]"), vel(*W, "[S;1;s]")).size() == 6);
}

TEST_CASE("order, generating relations and b-tilde agree") {
  for (const auto& W : many(system_file("a1"), system_file("a2"), system_file("b2"))) {
    SpringerPoset V(*W);
    SpringerPoset mixed(*W, BRecursion::Mixed, DescentPolicy::Largest);
    const auto& E = V.elements();
    const auto le = closure(*W, E);
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = 0; j < E.size(); ++j) {
        CHECK(V.leq1(E[i], E[j]) == leq1_oracle(*W, E[i], E[j]));
        CHECK(V.leq2(E[i], E[j]) == leq2_oracle(*W, E[i], E[j]));
        const LaurentPoly b = V.b_poly(E[i], E[j]);
        CHECK(le[i][j] == !b.is_zero());
        CHECK(b == mixed.b_poly(E[i], E[j]));
        if (!b.is_zero()) CHECK(b.is_monic_in_abar(v_dim(E[j]) - v_dim(E[i])));
      }
  }
}

TEST_CASE("involution identity") {
  for (const auto& W : many(system_file("a1"), system_file("a2"))) {
    SpringerPoset V(*W);
    const auto& E = V.elements();
    for (const auto& w : E)
      for (const auto& v : E) {
        LaurentPoly sum;
        for (const auto& z : E) sum += V.b_poly(w, z) * V.b_poly(z, v).bar();
        CHECK(sum == (w == v ? LaurentPoly::one() : LaurentPoly()));
      }
  }
}

TEST_CASE("quadratic relation of the Hecke action") {
  auto W = system_file("a2");
  SpringerPoset V(*W);
  for (const auto& v : V.elements())
    for (Gen s = 0; s < 2; ++s)
      for (Side side : {Side::Left, Side::Right}) {
        const ModuleElement m{{v, LaurentPoly::one()}};
        const ModuleElement once = hecke_act({side, s}, m);
        ModuleElement expected = m;
        for (const auto& [x, c] : once) {
          auto& slot = expected[x];
          slot += c * LaurentPoly::alpha();
          if (slot.is_zero()) expected.erase(x);
        }
        CHECK(hecke_act({side, s}, once) == expected);
        CHECK(hecke_act_inverse({side, s}, once) == m);
      }
}

TEST_CASE("c polynomials") {
  auto W = system_file("a1");
  SpringerPoset V(*W);
  for (const auto& w : V.elements())
    for (const auto& v : V.elements()) {
      const QPoly expected = V.leq(w, v) ? QPoly::one() : QPoly();
      CHECK(V.c_poly(w, v) == expected);
      CHECK(V.c_inv_poly(w, v) == expected);
    }

  auto A2 = system_file("a2");
  SpringerPoset V2(*A2);
  const auto& E = V2.elements();
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, E.size() - 1);
  for (int t = 0; t < 300; ++t) {
    const auto& w = E[pick(rng)];
    const auto& v = E[pick(rng)];
    QPoly sum;
    for (const auto& z : V2.interval(w, v)) {
      const QPoly term = V2.c_poly(w, z) * V2.c_inv_poly(z, v);
      if ((v_dim(z) - v_dim(w)) % 2) sum -= term;
      else sum += term;
    }
    CHECK(sum == (w == v ? QPoly::one() : QPoly()));
  }
}

TEST_CASE("Mobius values and purity") {
  for (const auto& W : many(system_file("a1"), system_file("a2"))) {
    SpringerPoset V(*W);
    const auto& E = V.elements();
    const auto le = V.order_matrix(E);
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = 0; j < E.size(); ++j) {
        if (!le[i][j]) continue;
        const int gap = v_dim(E[j]) - v_dim(E[i]);
        if (gap > 4) continue;
        const long mu = V.mobius(E[i], E[j]);
        CHECK(mu == mobius_by_chains(le, i, j));
        CHECK(mu == (gap % 2 ? -1 : 1));
        CHECK(V.chain_lengths(E[i], E[j]) == std::make_pair(gap + 1, gap + 1));
      }
  }
  auto W = system_file("a1");
  SpringerPoset V(*W);
  CHECK(V.mobius(vel(*W, "[S;1;1]"), vel(*W, "[S;1;1]")) == 1);
  CHECK(V.mobius(vel(*W, "[∅;1;1]"), vel(*W, "[S;1;1]")) == -1);
  CHECK(V.mobius(vel(*W, "[∅;s;1]"), vel(*W, "[S;1;s]")) == -1);
}

TEST_CASE("graph edges and Deodhar counts") {
  auto W = system_file("a1");
  SpringerPoset V(*W);
  CHECK(V.graph_edge(vel(*W, "[∅;1;1]"), vel(*W, "[S;1;1]")));
  CHECK(V.graph_edge(vel(*W, "[S;1;1]"), vel(*W, "[S;1;s]")));
  CHECK_FALSE(V.graph_edge(vel(*W, "[∅;1;s]"), vel(*W, "[S;1;1]")));
  for (const auto& A : many(system_file("a1"), system_file("a2"))) {
    SpringerPoset P(*A);
    const auto& E = P.elements();
    for (const auto& w : E)
      for (const auto& v : E) CHECK(P.graph_edge(w, v) == P.graph_edge_combinatorial(w, v));
  }
  const auto bottom = vel(*W, "[∅;s;1]"), top = vel(*W, "[S;1;s]");
  for (const auto& z : V.interval(bottom, top)) CHECK(V.deodhar_count(bottom, z, top) >= 3);
}

TEST_CASE("Hasse diagram of A1") {
  auto W = system_file("a1");
  SpringerPoset V(*W);
  const auto covers = V.hasse(V.elements());
  CHECK(covers.size() == 8);
  for (auto [lo, hi] : covers) CHECK(v_dim(V.elements()[hi]) == v_dim(V.elements()[lo]) + 1);
}

TEST_CASE("infinite W works pairwise") {
  auto W = system_file("i2inf");
  SpringerPoset V(*W);
  CHECK_THROWS(V.elements());
  const auto w = vel(*W, "[∅;s1,s2;1]");
  const auto v = vel(*W, "[S;1;s2,s1]");
  const auto I = V.interval(w, v);
  REQUIRE_FALSE(I.empty());
  LaurentPoly sum;
  for (const auto& z : I) sum += V.b_poly(w, z) * V.b_poly(z, v).bar();
  CHECK(sum.is_zero());
  CHECK(V.b_poly(w, v).is_monic_in_abar(v_dim(v) - v_dim(w)));
  CHECK(V.mobius(w, v) == ((v_dim(v) - v_dim(w)) % 2 ? -1 : 1));
}
