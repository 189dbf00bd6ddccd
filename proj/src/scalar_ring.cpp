#include "coxkl/scalar_ring.hpp"

#include <mpfr.h>

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace coxkl {

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("root coordinate overflow");
  return r;
}

std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("root coordinate overflow");
  return r;
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("root coordinate overflow");
  return r;
}

}  // namespace checked

namespace {

using Poly = std::vector<std::int64_t>;  // low degree first

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = checked::add(out[i + j], checked::mul(a[i], b[j]));
  trim(out);
  return out;
}

// Exact division by a monic polynomial; the remainder must vanish.
Poly poly_div_exact(Poly num, const Poly& den) {
  const std::size_t dd = den.size() - 1;
  if (num.size() < den.size()) throw std::logic_error("cyclotomic division degree");
  Poly quot(num.size() - dd, 0);
  for (std::size_t i = num.size(); i-- > dd;) {
    const std::int64_t q = num[i];
    quot[i - dd] = q;
    for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] = checked::sub(num[i - dd + j], checked::mul(q, den[j]));
  }
  for (auto c : num)
    if (c != 0) throw std::logic_error("cyclotomic division left a remainder");
  return quot;
}

const Poly& cyclotomic_poly(int n) {
  static std::map<int, Poly> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Poly num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  Poly den{1};
  for (int d = 1; d < n; ++d)
    if (n % d == 0) den = poly_mul(den, cyclotomic_poly(d));
  return cache.emplace(n, poly_div_exact(num, den)).first->second;
}

// Minimal polynomial of 2cos(2pi/n) for n >= 3, from the palindromic Phi_n.
Poly real_cyclotomic_poly(int n) {
  const Poly& phi = cyclotomic_poly(n);
  const int d = static_cast<int>(phi.size() - 1) / 2;
  // C_j(x) = z^j + z^-j as polynomials in x = z + 1/z.
  std::vector<Poly> cheb{{2}, {0, 1}};
  for (int j = 2; j <= d; ++j) {
    Poly next(j + 1, 0);
    for (std::size_t i = 0; i < cheb[j - 1].size(); ++i) next[i + 1] += cheb[j - 1][i];
    for (std::size_t i = 0; i < cheb[j - 2].size(); ++i) next[i] -= cheb[j - 2][i];
    cheb.push_back(next);
  }
  Poly psi(d + 1, 0);
  psi[0] = phi[d];
  for (int j = 1; j <= d; ++j)
    for (std::size_t i = 0; i < cheb[j].size(); ++i) psi[i] = checked::add(psi[i], checked::mul(phi[d + j], cheb[j][i]));
  return psi;
}

void reduce_mod(Poly& v, const Poly& minpoly) {
  const std::size_t d = minpoly.size() - 1;
  for (std::size_t i = v.size(); i-- > d;) {
    const std::int64_t q = v[i];
    if (q == 0) continue;
    for (std::size_t j = 0; j < d; ++j) v[i - d + j] = checked::sub(v[i - d + j], checked::mul(q, minpoly[j]));
    v[i] = 0;
  }
  v.resize(d);
}

}  // namespace

ScalarRing ScalarRing::integers() {
  ScalarRing r;
  r.conductor_ = 0;
  r.degree_ = 1;
  r.minpoly_ = {0, 1};
  r.powers_ = {1.0};
  return r;
}

ScalarRing ScalarRing::cyclotomic(int conductor) {
  if (conductor < 1) throw std::invalid_argument("cyclotomic conductor must be >= 1");
  ScalarRing r;
  r.conductor_ = conductor;
  if (conductor == 1) {
    r.minpoly_ = {2, 1};  // c = -2
  } else {
    r.minpoly_ = real_cyclotomic_poly(2 * conductor);
  }
  r.degree_ = static_cast<int>(r.minpoly_.size() - 1);
  const double c = 2.0 * std::cos(M_PI / conductor);
  r.powers_.resize(r.degree_);
  double p = 1.0;
  for (int k = 0; k < r.degree_; ++k, p *= c) r.powers_[k] = p;
  return r;
}

std::vector<std::int64_t> ScalarRing::from_int(std::int64_t v) const {
  auto out = zero();
  out[0] = v;
  return out;
}

std::vector<std::int64_t> ScalarRing::two_cos(int k) const {
  if (conductor_ == 0) throw std::logic_error("two_cos on the plain integer ring");
  // Chebyshev recurrence C_{j+1} = c C_j - C_{j-1}, carried out on polynomials in c.
  Poly prev{2}, cur{0, 1};
  for (int j = 1; j < k; ++j) {
    Poly next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] = checked::sub(next[i], prev[i]);
    prev = std::move(cur);
    cur = std::move(next);
  }
  Poly out = (k == 0) ? prev : cur;
  if (out.size() < static_cast<std::size_t>(degree_)) out.resize(degree_, 0);
  reduce_mod(out, minpoly_);
  return out;
}

void ScalarRing::mul(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                     std::span<std::int64_t> out) const {
  if (degree_ == 1) {
    out[0] = checked::mul(a[0], b[0]);
    return;
  }
  Poly tmp(2 * degree_ - 1, 0);
  for (int i = 0; i < degree_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < degree_; ++j) tmp[i + j] = checked::add(tmp[i + j], checked::mul(a[i], b[j]));
  }
  reduce_mod(tmp, minpoly_);
  for (int i = 0; i < degree_; ++i) out[i] = tmp[i];
}

void ScalarRing::sub_mul(std::span<std::int64_t> acc, std::span<const std::int64_t> k,
                         std::span<const std::int64_t> v) const {
  if (degree_ == 1) {
    acc[0] = checked::sub(acc[0], checked::mul(k[0], v[0]));
    return;
  }
  std::vector<std::int64_t> prod(degree_);
  mul(k, v, prod);
  for (int i = 0; i < degree_; ++i) acc[i] = checked::sub(acc[i], prod[i]);
}

double ScalarRing::approx(std::span<const std::int64_t> a) const {
  double v = 0.0;
  for (int k = 0; k < degree_; ++k) v += static_cast<double>(a[k]) * powers_[k];
  return v;
}

int ScalarRing::sign(std::span<const std::int64_t> a) const {
  if (degree_ == 1) return (a[0] > 0) - (a[0] < 0);
  bool all_zero = true;
  double value = 0.0, scale = 0.0;
  for (int k = 0; k < degree_; ++k) {
    if (a[k] != 0) all_zero = false;
    const double term = static_cast<double>(a[k]) * powers_[k];
    value += term;
    scale += std::fabs(term);
  }
  // 1, c, ..., c^(d-1) is a basis, so only the zero vector is zero.
  if (all_zero) return 0;
  const double bound = (degree_ + 8) * scale * std::ldexp(1.0, -50);
  if (std::fabs(value) > bound) return value > 0 ? 1 : -1;
  return sign_mpfr(a);
}

int ScalarRing::sign_mpfr(std::span<const std::int64_t> a) const {
  double scale = 0.0;
  for (int k = 0; k < degree_; ++k) scale += std::fabs(static_cast<double>(a[k])) * std::pow(2.0, k);
  for (mpfr_prec_t prec = 128; prec <= (1 << 18); prec *= 4) {
    mpfr_t c, acc, term, err;
    mpfr_inits2(prec, c, acc, term, err, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(c, MPFR_RNDN);
    mpfr_div_ui(c, c, static_cast<unsigned long>(conductor_), MPFR_RNDN);
    mpfr_cos(c, c, MPFR_RNDN);
    mpfr_mul_2ui(c, c, 1, MPFR_RNDN);
    mpfr_set_si(acc, 0, MPFR_RNDN);
    for (int k = degree_ - 1; k >= 0; --k) {
      mpfr_mul(acc, acc, c, MPFR_RNDN);
      mpfr_set_si(term, static_cast<long>(a[k]), MPFR_RNDN);
      mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    // Each of the ~2d roundings contributes at most 2^-prec relative to the
    // magnitude bound sum |a_k| 2^k.
    mpfr_set_d(err, scale * (2 * degree_ + 8), MPFR_RNDU);
    mpfr_mul_2si(err, err, -static_cast<long>(prec) + 2, MPFR_RNDU);
    mpfr_abs(term, acc, MPFR_RNDN);
    const bool certified = mpfr_cmp(term, err) > 0;
    const int s = mpfr_sgn(acc);
    mpfr_clears(c, acc, term, err, static_cast<mpfr_ptr>(nullptr));
    if (certified) return s > 0 ? 1 : -1;
  }
  throw std::runtime_error("sign certification did not converge");
}

}  // namespace coxkl
