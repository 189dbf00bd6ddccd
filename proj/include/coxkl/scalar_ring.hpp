#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace coxkl {

/// Exact arithmetic in Z[c] with c = 2cos(pi/M).
///
/// Elements are coefficient vectors of length degree() in the power basis
/// 1, c, ..., c^(d-1). Degree-1 rings are plain integers; they back the
/// integer Cartan fast path. Signs of nonzero elements are certified by
/// floating-point evaluation with an explicit error bound, escalating to
/// MPFR at increasing precision when the bound is inconclusive.
class ScalarRing {
 public:
  /// The ring Z (used with an integer Cartan matrix).
  static ScalarRing integers();
  /// The ring Z[2cos(pi/M)], M >= 1.
  static ScalarRing cyclotomic(int conductor);

  int degree() const { return degree_; }
  int conductor() const { return conductor_; }
  bool is_integral() const { return degree_ == 1; }

  std::vector<std::int64_t> zero() const { return std::vector<std::int64_t>(degree_, 0); }
  std::vector<std::int64_t> from_int(std::int64_t v) const;
  /// 2cos(k*pi/M) as a ring element.
  std::vector<std::int64_t> two_cos(int k) const;

  /// out = a * b. `out` must not alias the inputs.
  void mul(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
           std::span<std::int64_t> out) const;
  /// acc -= k * v, coefficientwise in the ring.
  void sub_mul(std::span<std::int64_t> acc, std::span<const std::int64_t> k,
               std::span<const std::int64_t> v) const;

  /// Exact sign (-1, 0, 1).
  int sign(std::span<const std::int64_t> a) const;
  double approx(std::span<const std::int64_t> a) const;

  /// Monic minimal polynomial of c, low degree first (degree()+1 entries).
  const std::vector<std::int64_t>& minimal_polynomial() const { return minpoly_; }

 private:
  ScalarRing() = default;
  int sign_mpfr(std::span<const std::int64_t> a) const;

  int conductor_ = 1;
  int degree_ = 1;
  std::vector<std::int64_t> minpoly_;
  std::vector<double> powers_;  // c^k rounded to double
};

namespace checked {
std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t sub(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);
}  // namespace checked

}  // namespace coxkl
