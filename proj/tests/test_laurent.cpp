#include <doctest.h>

#include <random>

#include "coxkl/laurent.hpp"

using namespace coxkl;

namespace {

LaurentPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> exp(-4, 4), coeff(-3, 3), count(0, 4);
  std::vector<LaurentPoly::Term> terms;
  for (int k = count(rng); k > 0; --k) terms.emplace_back(exp(rng), Int(coeff(rng)));
  return LaurentPoly::from_terms(std::move(terms));
}

// Binomial expansion of (u^-1 - u)^n, independent of the multiplication routine.
LaurentPoly abar_power_oracle(int n) {
  std::vector<LaurentPoly::Term> terms;
  Int binom = 1;
  for (int k = 0; k <= n; ++k) {
    // (u^-1)^(n-k) (-u)^k
    terms.emplace_back(2 * k - n, k % 2 ? Int(-binom) : binom);
    binom = binom * (n - k) / (k + 1);
  }
  return LaurentPoly::from_terms(std::move(terms));
}

}  // namespace

TEST_CASE("bar involution") {
  CHECK(LaurentPoly::u().bar() == LaurentPoly::monomial(-1));
  CHECK(LaurentPoly::alpha().bar() == -LaurentPoly::alpha());
  CHECK(LaurentPoly::one().bar() == LaurentPoly::one());
  CHECK(LaurentPoly::abar() == -LaurentPoly::alpha());
  std::mt19937 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_poly(rng), q = random_poly(rng);
    CHECK(p.bar().bar() == p);
    CHECK((p * q).bar() == p.bar() * q.bar());
    CHECK((p + q).bar() == p.bar() + q.bar());
  }
}

TEST_CASE("ring axioms") {
  std::mt19937 rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == LaurentPoly::zero());
    CHECK(a * LaurentPoly::one() == a);
    CHECK(a.shifted(3).shifted(-3) == a);
  }
  CHECK(LaurentPoly::from_terms({{1, Int(2)}, {1, Int(-2)}, {0, Int(0)}}).is_zero());
}

TEST_CASE("abar basis") {
  for (int n = 0; n <= 12; ++n) {
    CHECK(LaurentPoly::abar_power(n) == abar_power_oracle(n));
    const auto coeffs = LaurentPoly::abar_power(n).to_abar();
    REQUIRE(coeffs.size() == 1);
    CHECK(coeffs.begin()->first == n);
    CHECK(coeffs.begin()->second == 1);
    CHECK(LaurentPoly::abar_power(n).is_monic_in_abar(n));
  }
  const std::map<int, Int> mixed{{1, 2}, {3, -1}, {6, 5}};
  CHECK(LaurentPoly::from_abar(mixed).to_abar() == mixed);
  CHECK_THROWS_AS(LaurentPoly::u().to_abar(), std::domain_error);
  CHECK(LaurentPoly::abar().abar_string() == "abar");
  CHECK(LaurentPoly::zero().to_string() == "0");
}

TEST_CASE("evaluation at one") {
  CHECK(LaurentPoly::abar().value_at_one() == 0);
  CHECK(LaurentPoly::abar().derivative_at_one() == -2);
  CHECK(LaurentPoly::abar_power(2).derivative_at_one() == 0);
  CHECK((LaurentPoly::abar_power(3) + LaurentPoly::abar()).derivative_at_one() == -2);
}

TEST_CASE("r_tilde_from_q") {
  const QPoly q_minus_1({Int(-1), Int(1)});
  CHECK(r_tilde_from_q(q_minus_1, 0, 1) == LaurentPoly::abar());
  CHECK(r_tilde_from_q(QPoly::one(), 2, 2) == LaurentPoly::one());
  const QPoly q({Int(0), Int(1)});
  const QPoly cube = q_minus_1 * q_minus_1 * q_minus_1 + q * q_minus_1;
  CHECK(r_tilde_from_q(cube, 0, 3) == LaurentPoly::abar_power(3) + LaurentPoly::abar());
  CHECK(r_q_from_tilde(LaurentPoly::abar_power(3) + LaurentPoly::abar(), 0, 3) == cube);
  CHECK_THROWS_AS(r_q_from_tilde(LaurentPoly::u(), 0, 2), std::domain_error);
}

TEST_CASE("p_normalize") {
  CHECK(p_normalize(LaurentPoly::one(), 3, 3) == QPoly::one());
  CHECK(p_normalize(LaurentPoly::monomial(-2), 0, 2) == QPoly::one());
  CHECK(p_normalize(LaurentPoly::monomial(-2) + LaurentPoly::one(), 0, 2) == QPoly({Int(1), Int(1)}));
  CHECK_THROWS_WITH_AS(p_normalize(LaurentPoly::monomial(-1), 0, 2), "not a valid KL normal form", std::domain_error);
  CHECK_THROWS_AS(p_normalize(LaurentPoly::monomial(-4), 0, 2), std::domain_error);
}

TEST_CASE("q polynomials") {
  const QPoly a({Int(1), Int(2)}), b({Int(-1), Int(0), Int(3)});
  CHECK((a * b).coeffs() == std::vector<Int>{-1, -2, 3, 6});
  CHECK((a - a).is_zero());
  CHECK(a.in_u() == LaurentPoly::one() + LaurentPoly::monomial(2, 2));
  CHECK(QPoly({Int(1), Int(0), Int(0)}).degree() == 0);
}

TEST_CASE("large coefficients stay exact") {
  LaurentPoly p = LaurentPoly::one() + LaurentPoly::u();
  for (int i = 0; i < 7; ++i) p = p * p;
  // (1+u)^128 has central coefficient C(128,64), beyond 64 bits.
  Int c = 1;
  for (int k = 0; k < 64; ++k) c = c * (128 - k) / (k + 1);
  CHECK(p.coefficient(64) == c);
  CHECK(c > Int(std::numeric_limits<std::int64_t>::max()));
}
