#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "coxkl/coxeter.hpp"
#include "coxkl/kl.hpp"
#include "coxkl/springer.hpp"

namespace coxkl {

/// Bond orders for the hat system; omitted entries take the defaults
/// m(r, theta(r)) = 3 and m(theta(r), theta(s)) = 2.
struct HatConfig {
  std::map<std::string, int> hat_bonds;
  std::vector<std::tuple<std::string, std::string, int>> theta_bonds;
};

/// The system (W^, S^) with S^ = S u theta(S): generators of W keep their
/// indices and theta(r) is appended at index |S| + r.
class HatSystem {
 public:
  /// Throws std::invalid_argument on a bad config (unknown name, m(r,theta(r)) < 3).
  HatSystem(const CoxeterSystem& base, const HatConfig& config = {});

  const CoxeterSystem& base() const { return *base_; }
  const CoxeterSystem& hat() const { return *hat_; }
  int n() const { return base_->rank(); }
  Gen theta(Gen r) const { return static_cast<Gen>(n() + r); }
  GenSet S() const { return GenSet::first(n()); }
  GenSet R() const { return hat_->all() - S(); }

  Element embed(const Element& x) const;
  /// Inverse of embed; throws std::invalid_argument outside W.
  Element restrict(const Element& x) const;

  Element z_of(GenSet I) const;
  /// I_z from the commuting-support description; z must lie in W^_(S^ - S).
  GenSet i_of_z(const Element& z) const;
  /// I_z = S n z S z^-1 by direct conjugation.
  GenSet i_of_z_by_conjugation(const Element& z) const;
  bool in_base(const Element& x) const { return hat_->in_parabolic(x, S()); }

  /// l(x) - 2 |N(x^-1) n A| with A the reflections outside W.
  int twisted_length(const Element& x) const;

 private:
  const CoxeterSystem* base_;
  std::unique_ptr<CoxeterSystem> hat_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Word, int, WordHash> twisted_length_cache_;
};

/// a * z_I * b with a in W^I and b in W (elements of the base system).
struct OmegaElement {
  Element a;
  GenSet I;
  Element b;

  bool operator==(const OmegaElement& o) const { return I == o.I && a == o.a && b == o.b; }
  std::strong_ordering operator<=>(const OmegaElement& o) const;
};

struct OmegaHash {
  std::size_t operator()(const OmegaElement& x) const noexcept {
    return hash_combine(hash_combine(std::hash<GenSet>{}(x.I), ElementHash{}(x.a)), ElementHash{}(x.b));
  }
};

/// Throws std::invalid_argument unless a is in W^I.
OmegaElement make_omega(const HatSystem& h, Element a, GenSet I, Element b);
Element to_hat(const HatSystem& h, const OmegaElement& x);
/// -l(a) - l(z_I) + l(b).
int omega_length(const HatSystem& h, const OmegaElement& x);
/// Throws NotInOmegaError when x is not in any W z_I W.
OmegaElement omega_decompose(const HatSystem& h, const Element& x);
/// All of Omega, sorted; W must be finite.
std::vector<OmegaElement> omega_enumerate(const HatSystem& h);

OmegaElement phi(const HatSystem& h, const VElement& v);
VElement phi_inv(const HatSystem& h, const OmegaElement& x);
/// a z_I b^-1 w_S; W must be finite.
Element phi_prime(const HatSystem& h, const VElement& v);

/// Minimal representative of x W in W^^S.
Element pi_project(const HatSystem& h, const Element& x);

using OmegaTable = PolyTable<OmegaElement, OmegaHash>;

/// R^A and P_A for A = T^ - W, on Omega and on W^.
class TwistedKL {
 public:
  explicit TwistedKL(const HatSystem& h, DescentPolicy policy = DescentPolicy::Smallest);

  const HatSystem& hat() const { return *h_; }
  const ClassicalKL& base_kl() const { return base_kl_; }
  const ClassicalKL& hat_kl() const { return hat_kl_; }

  /// Closed form at b(y) = 1, right recursion on b(y) otherwise.
  LaurentPoly r_a(const OmegaElement& x, const OmegaElement& y) const;
  /// Left recursion over S^ with descents detected by twisted length.
  LaurentPoly r_a_generic(const Element& x, const Element& y, int max_depth = 4096) const;
  /// R~(y w_S, x w_S); W must be finite.
  LaurentPoly r_a_translated(const Element& x, const Element& y) const;

  bool leq_a(const OmegaElement& x, const OmegaElement& y) const { return !r_a(x, y).is_zero(); }
  /// On Omega via R^A; elsewhere via the w_S translation (W finite).
  bool leq_a(const Element& x, const Element& y) const;
  bool leq_a_translated(const Element& x, const Element& y) const;

  /// {z in Omega : x <=_A z <=_A y}, sorted by twisted length.
  std::vector<OmegaElement> interval(const OmegaElement& x, const OmegaElement& y) const;

  QPoly p_a(const OmegaElement& x, const OmegaElement& y) const;
  /// P for the complementary section T^ + A: order reversed, lengths negated,
  /// R(v,w) = R^A(w,v). Nonzero only when y <=_A x.
  QPoly p_complement(const OmegaElement& x, const OmegaElement& y) const;

  const OmegaTable& ra_table() const { return ra_; }

 private:
  LaurentPoly r_a_generic_impl(const Element& x, const Element& y, int depth, int max_depth) const;
  const std::vector<Element>& base_up_to(int len) const;

  const HatSystem* h_;
  DescentPolicy policy_;
  ClassicalKL base_kl_;
  ClassicalKL hat_kl_;
  mutable OmegaTable ra_{PolyKind::RA};
  mutable ElementTable generic_{PolyKind::RA};
  mutable OmegaTable pa_{PolyKind::PA};
  mutable OmegaTable pc_{PolyKind::PA};
  mutable std::mutex mutex_;
  mutable std::map<int, std::vector<Element>> bounded_;
};

/// Both sides of R~(a1 z1 w_S, a2 z2 b2 w_S) = [b2 in W_I1] R~(z1,z2) R~(a1 b2^-1, a2).
struct RemarkSides {
  LaurentPoly lhs;
  LaurentPoly rhs;
  bool holds() const { return lhs == rhs; }
};
/// z1, z2 in W^_(S^ - S) and a1, a2, b2 in W (base elements); throws
/// std::invalid_argument when a_i is not in W^(I_i).
RemarkSides remark_sides(const TwistedKL& kl, const Element& a1, const Element& z1, const Element& a2,
                         const Element& z2, const Element& b2);

std::string format(const HatSystem& h, const OmegaElement& x);

}  // namespace coxkl
