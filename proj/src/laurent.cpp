#include "coxkl/laurent.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace coxkl {

LaurentPoly::LaurentPoly(Int constant) {
  if (constant != 0) terms_.emplace_back(0, std::move(constant));
}

LaurentPoly LaurentPoly::monomial(int exponent, Int coeff) {
  LaurentPoly p;
  if (coeff != 0) p.terms_.emplace_back(exponent, std::move(coeff));
  return p;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  LaurentPoly p;
  for (auto& [e, c] : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == e) p.terms_.back().second += c;
    else p.terms_.emplace_back(e, std::move(c));
  }
  std::erase_if(p.terms_, [](const Term& t) { return t.second == 0; });
  return p;
}

LaurentPoly LaurentPoly::alpha() { return from_terms({{-1, -1}, {1, 1}}); }
LaurentPoly LaurentPoly::abar() { return from_terms({{-1, 1}, {1, -1}}); }

LaurentPoly LaurentPoly::abar_power(int n) {
  // abar^n = sum_k C(n,k) (-1)^k u^(2k-n)
  std::vector<Term> terms;
  Int binom = 1;
  for (int k = 0; k <= n; ++k) {
    terms.emplace_back(2 * k - n, k % 2 ? Int(-binom) : binom);
    binom = binom * (n - k) / (k + 1);
  }
  return from_terms(std::move(terms));
}

LaurentPoly LaurentPoly::from_abar(const std::map<int, Int>& coeffs) {
  LaurentPoly out;
  for (const auto& [k, c] : coeffs) {
    if (k < 0) throw std::domain_error("negative power of abar");
    out += abar_power(k) * LaurentPoly(c);
  }
  return out;
}

Int LaurentPoly::coefficient(int exponent) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                             [](const Term& t, int e) { return t.first < e; });
  return it != terms_.end() && it->first == exponent ? it->second : Int(0);
}

int LaurentPoly::min_exponent() const {
  if (is_zero()) throw std::domain_error("exponent range of the zero polynomial");
  return terms_.front().first;
}

int LaurentPoly::max_exponent() const {
  if (is_zero()) throw std::domain_error("exponent range of the zero polynomial");
  return terms_.back().first;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly p;
  p.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) p.terms_.emplace_back(-it->first, it->second);
  return p;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.first += k;
  return p;
}

Int LaurentPoly::value_at_one() const {
  Int v = 0;
  for (const auto& t : terms_) v += t.second;
  return v;
}

Int LaurentPoly::derivative_at_one() const {
  Int v = 0;
  for (const auto& t : terms_) v += t.second * t.first;
  return v;
}

// Peel off the most negative exponent: abar^k is the only basis element
// reaching u^-k, with coefficient 1 there.
std::map<int, Int> LaurentPoly::to_abar() const {
  std::map<int, Int> out;
  LaurentPoly rest = *this;
  while (!rest.is_zero()) {
    const int e = rest.min_exponent();
    if (e > 0) throw std::domain_error("polynomial is not in Z[abar]");
    const Int c = rest.terms_.front().second;
    out[-e] = c;
    rest -= abar_power(-e) * LaurentPoly(c);
  }
  return out;
}

bool LaurentPoly::is_monic_in_abar(int degree) const {
  if (is_zero()) return false;
  try {
    auto c = to_abar();
    return c.rbegin()->first == degree && c.rbegin()->second == 1;
  } catch (const std::domain_error&) {
    return false;
  }
}

LaurentPoly LaurentPoly::negative_part() const {
  LaurentPoly p;
  for (const auto& t : terms_)
    if (t.first < 0) p.terms_.push_back(t);
  return p;
}

namespace {

template <class Op>
std::vector<LaurentPoly::Term> merge(const std::vector<LaurentPoly::Term>& a,
                                     const std::vector<LaurentPoly::Term>& b, Op op) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, op(Int(0), b[j].second));
      ++j;
    } else {
      Int c = op(a[i].second, b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  terms_ = merge(terms_, o.terms_, [](const Int& x, const Int& y) { return Int(x + y); });
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  terms_ = merge(terms_, o.terms_, [](const Int& x, const Int& y) { return Int(x - y); });
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const int lo = a.min_exponent() + b.min_exponent();
  std::vector<Int> dense(a.max_exponent() + b.max_exponent() - lo + 1);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) dense[ea + eb - lo] += ca * cb;
  LaurentPoly p;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0) p.terms_.emplace_back(lo + static_cast<int>(i), std::move(dense[i]));
  return p;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

namespace {

void append_term(std::ostringstream& os, bool first, const Int& c, const std::string& var, int e) {
  const Int mag = c < 0 ? Int(-c) : c;
  if (first) {
    if (c < 0) os << '-';
  } else {
    os << (c < 0 ? " - " : " + ");
  }
  if (e == 0) {
    os << mag;
    return;
  }
  if (mag != 1) os << mag << '*';
  os << var;
  if (e != 1) os << '^' << e;
}

}  // namespace

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    append_term(os, first, c, "u", e);
    first = false;
  }
  return os.str();
}

std::string LaurentPoly::abar_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : to_abar()) {
    append_term(os, first, c, "abar", k);
    first = false;
  }
  return os.str();
}

QPoly::QPoly(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void QPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Int> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return QPoly(std::move(out));
}

QPoly QPoly::operator-() const {
  QPoly p = *this;
  for (auto& c : p.coeffs_) c = -c;
  return p;
}

LaurentPoly QPoly::in_u() const {
  std::vector<LaurentPoly::Term> terms;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) terms.emplace_back(2 * static_cast<int>(i), coeffs_[i]);
  return LaurentPoly::from_terms(std::move(terms));
}

std::string QPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    append_term(os, first, coeffs_[i], "q", static_cast<int>(i));
    first = false;
  }
  return os.str();
}

LaurentPoly r_tilde_from_q(const QPoly& rq, int lx, int ly) {
  const int k = lx - ly;
  LaurentPoly sign = LaurentPoly::monomial(k, k % 2 ? -1 : 1);
  return sign * rq.in_u();
}

QPoly r_q_from_tilde(const LaurentPoly& r, int lx, int ly) {
  const int k = ly - lx;
  // R(u^2) = (-u)^(ly - lx) * rtilde
  LaurentPoly p = LaurentPoly::monomial(k, k % 2 ? -1 : 1) * r;
  std::vector<Int> coeffs;
  for (const auto& [e, c] : p.terms()) {
    if (e < 0 || e % 2 != 0) throw std::domain_error("not the image of a q-polynomial");
    if (coeffs.size() <= static_cast<std::size_t>(e / 2)) coeffs.resize(e / 2 + 1);
    coeffs[e / 2] = c;
  }
  return QPoly(std::move(coeffs));
}

QPoly p_normalize(const LaurentPoly& p, int llow, int lhigh) {
  const LaurentPoly shifted = p.shifted(lhigh - llow);
  std::vector<Int> coeffs;
  for (const auto& [e, c] : shifted.terms()) {
    if (e < 0 || e % 2 != 0) throw std::domain_error("not a valid KL normal form");
    if (coeffs.size() <= static_cast<std::size_t>(e / 2)) coeffs.resize(e / 2 + 1);
    coeffs[e / 2] = c;
  }
  return QPoly(std::move(coeffs));
}

}  // namespace coxkl
