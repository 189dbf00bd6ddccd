#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace coxkl {

using Int = boost::multiprecision::cpp_int;

/// Integer Laurent polynomial in u, stored sparsely with exponents ascending
/// and no zero coefficients.
class LaurentPoly {
 public:
  using Term = std::pair<int, Int>;

  LaurentPoly() = default;
  explicit LaurentPoly(Int constant);
  static LaurentPoly monomial(int exponent, Int coeff = 1);
  static LaurentPoly from_terms(std::vector<Term> terms);
  static LaurentPoly zero() { return {}; }
  static LaurentPoly one() { return LaurentPoly(Int(1)); }
  static LaurentPoly u() { return monomial(1); }
  /// alpha = u - u^-1
  static LaurentPoly alpha();
  /// abar = u^-1 - u
  static LaurentPoly abar();
  static LaurentPoly abar_power(int n);
  /// sum_k c_k abar^k
  static LaurentPoly from_abar(const std::map<int, Int>& coeffs);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  Int coefficient(int exponent) const;
  int min_exponent() const;
  int max_exponent() const;

  LaurentPoly bar() const;
  /// Multiply by u^k.
  LaurentPoly shifted(int k) const;
  Int value_at_one() const;
  /// d/du evaluated at u = 1.
  Int derivative_at_one() const;

  /// Coefficients in the abar basis; throws std::domain_error if p is not in Z[abar].
  std::map<int, Int> to_abar() const;
  bool is_monic_in_abar(int degree) const;

  /// Part with negative exponents only.
  LaurentPoly negative_part() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly operator-() const;
  bool operator==(const LaurentPoly&) const = default;

  /// e.g. "u^-1 - u", "0".
  std::string to_string() const;
  std::string abar_string() const;

 private:
  std::vector<Term> terms_;
};

/// Polynomial in q with nonnegative exponents, dense and trimmed.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Int> coeffs);
  static QPoly one() { return QPoly({Int(1)}); }

  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Int>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Int coefficient(int k) const { return k >= 0 && k <= degree() ? coeffs_[k] : Int(0); }

  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  QPoly operator-() const;
  bool operator==(const QPoly&) const = default;

  /// Substitute q = u^2.
  LaurentPoly in_u() const;
  std::string to_string() const;

 private:
  void trim();
  std::vector<Int> coeffs_;
};

/// (-u)^(lx - ly) * R(u^2).
LaurentPoly r_tilde_from_q(const QPoly& rq, int lx, int ly);
/// Inverse of r_tilde_from_q; throws std::domain_error on a non-image.
QPoly r_q_from_tilde(const LaurentPoly& r, int lx, int ly);
/// P(q) with P(u^2) = u^(lhigh - llow) p; throws std::domain_error
/// ("not a valid KL normal form") on odd or negative exponents.
QPoly p_normalize(const LaurentPoly& p, int llow, int lhigh);

}  // namespace coxkl
