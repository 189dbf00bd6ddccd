#include "coxkl/hat.hpp"

#include <algorithm>
#include <stdexcept>

#include "coxkl/errors.hpp"

namespace coxkl {

namespace {

std::string theta_name(const std::string& name, const std::vector<std::string>& taken) {
  std::string out = (!name.empty() && name[0] == 's') ? "t" + name.substr(1) : "t_" + name;
  while (std::find(taken.begin(), taken.end(), out) != taken.end()) out += "'";
  return out;
}

void check_bond(int m, const std::string& where, int min) {
  if (m != kInfinity && m < min)
    throw std::invalid_argument(where + ": bond order " + std::to_string(m) + " is below " + std::to_string(min));
}

// P(q) from its image P(u^2).
QPoly halve(const LaurentPoly& p) {
  std::vector<Int> coeffs;
  for (const auto& [e, c] : p.terms()) {
    if (coeffs.size() <= static_cast<std::size_t>(e / 2)) coeffs.resize(e / 2 + 1);
    coeffs[e / 2] = c;
  }
  return QPoly(std::move(coeffs));
}

}  // namespace

HatSystem::HatSystem(const CoxeterSystem& base, const HatConfig& config) : base_(&base) {
  const int n = base.rank();
  if (2 * n > kMaxGenerators) throw std::invalid_argument("hat system would exceed the generator limit");
  std::vector<std::string> names = base.generator_names();
  for (int r = 0; r < n; ++r) names.push_back(theta_name(base.name(r), names));

  std::vector<std::vector<int>> m(2 * n, std::vector<int>(2 * n, 2));
  for (int r = 0; r < 2 * n; ++r) m[r][r] = 1;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) m[r][s] = base.bond(r, s);
  for (int r = 0; r < n; ++r) m[r][n + r] = m[n + r][r] = 3;

  for (const auto& [name, bond] : config.hat_bonds) {
    const auto r = base.find_generator(name);
    if (!r) throw std::invalid_argument("hat_bonds names unknown generator '" + name + "'");
    check_bond(bond, "hat bond at '" + name + "'", 3);
    m[*r][n + *r] = m[n + *r][*r] = bond;
  }
  for (const auto& [lhs, rhs, bond] : config.theta_bonds) {
    const auto r = base.find_generator(lhs);
    const auto s = base.find_generator(rhs);
    if (!r) throw std::invalid_argument("theta_bonds names unknown generator '" + lhs + "'");
    if (!s) throw std::invalid_argument("theta_bonds names unknown generator '" + rhs + "'");
    if (*r == *s) throw std::invalid_argument("theta_bonds pairs a generator with itself");
    check_bond(bond, "theta bond '" + lhs + "','" + rhs + "'", 2);
    m[n + *r][n + *s] = m[n + *s][n + *r] = bond;
  }
  hat_ = std::make_unique<CoxeterSystem>(std::move(names), std::move(m));
}

Element HatSystem::embed(const Element& x) const {
  if (&x.system() != base_) throw std::invalid_argument("element does not belong to the base system");
  // S comes first in the hat enumeration, so canonical words agree.
  return hat_->reduce(x.word());
}

Element HatSystem::restrict(const Element& x) const {
  if (&x.system() != hat_.get()) throw std::invalid_argument("element does not belong to the hat system");
  if (!in_base(x)) throw std::invalid_argument(hat_->format(x) + " does not lie in W");
  return base_->reduce(x.word());
}

Element HatSystem::z_of(GenSet I) const {
  Word w;
  for (Gen r : (S() - I).members()) w.push_back(theta(r));
  return hat_->reduce(w);
}

GenSet HatSystem::i_of_z(const Element& z) const {
  const GenSet supp = hat_->support(z);
  if (!supp.is_subset_of(R())) throw std::invalid_argument(hat_->format(z) + " is not in the parabolic subgroup on theta(S)");
  GenSet out;
  for (Gen s : S().members()) {
    bool commutes = true;
    for (Gen r : supp.members()) commutes = commutes && hat_->bond(s, r) == 2;
    if (commutes) out.insert(s);
  }
  return out;
}

GenSet HatSystem::i_of_z_by_conjugation(const Element& z) const {
  GenSet out;
  const Element zi = hat_->inv(z);
  for (Gen s : S().members()) {
    // s in z S z^-1 iff z^-1 s z is a simple generator in S.
    const Element c = hat_->mul(hat_->mul(zi, hat_->generator(s)), z);
    if (c.length() == 1 && S().contains(c.word().front())) out.insert(s);
  }
  return out;
}

int HatSystem::twisted_length(const Element& x) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = twisted_length_cache_.find(x.word()); it != twisted_length_cache_.end()) return it->second;
  }
  int outside = 0;
  for (const auto& root : hat_->inversion_roots(hat_->inv(x)))
    if (!hat_->root_support(root).is_subset_of(S())) ++outside;
  const int value = x.length() - 2 * outside;
  std::lock_guard lock(mutex_);
  twisted_length_cache_.emplace(x.word(), value);
  return value;
}

std::strong_ordering OmegaElement::operator<=>(const OmegaElement& o) const {
  if (auto c = I.bits() <=> o.I.bits(); c != 0) return c;
  if (auto c = a <=> o.a; c != 0) return c;
  return b <=> o.b;
}

OmegaElement make_omega(const HatSystem& h, Element a, GenSet I, Element b) {
  const CoxeterSystem& W = h.base();
  if (&a.system() != &W || &b.system() != &W) throw std::invalid_argument("Omega factors must be base elements");
  if (!I.is_subset_of(W.all())) throw std::invalid_argument("I is not a subset of S");
  if (!W.in_quotient(a, I))
    throw std::invalid_argument("a = " + W.format(a) + " is not a minimal coset representative for W_" + W.format_set(I));
  return OmegaElement{std::move(a), I, std::move(b)};
}

Element to_hat(const HatSystem& h, const OmegaElement& x) {
  const CoxeterSystem& H = h.hat();
  return H.mul(H.mul(h.embed(x.a), h.z_of(x.I)), h.embed(x.b));
}

int omega_length(const HatSystem& h, const OmegaElement& x) {
  return -x.a.length() - (h.n() - x.I.size()) + x.b.length();
}

OmegaElement omega_decompose(const HatSystem& h, const Element& x) {
  const CoxeterSystem& H = h.hat();
  const CoxeterSystem& W = h.base();
  if (&x.system() != &H) throw std::invalid_argument("element does not belong to the hat system");
  // x = v * u * v2 with v, v2 in W and m = u minimal in W u W.
  auto [v, u] = H.left_coset_decompose(x, h.S());
  auto [m, v2] = H.coset_decompose(u, h.S());
  const GenSet supp = H.support(m);
  if (!supp.is_subset_of(h.R())) throw NotInOmegaError(H.format(x) + " is not in any double coset W z_I W");
  GenSet I = h.S();
  for (Gen r : h.S().members())
    if (supp.contains(h.theta(r))) I.erase(r);
  if (m != h.z_of(I)) throw NotInOmegaError(H.format(x) + " has minimal double coset representative " + H.format(m) +
                                            ", which is not of the form z_I");
  const GenSet Iz = h.i_of_z(m);
  // v = a c with c in W_Iz; c commutes past z_I into b.
  auto [a, c] = W.coset_decompose(h.restrict(v), Iz);
  return make_omega(h, std::move(a), Iz, W.mul(c, h.restrict(v2)));
}

std::vector<OmegaElement> omega_enumerate(const HatSystem& h) {
  const CoxeterSystem& W = h.base();
  if (!W.is_finite()) throw InfiniteGroupError("Omega is infinite for an infinite base group");
  const auto group = W.enumerate(W.all(), CosetKind::Parabolic);
  std::vector<OmegaElement> out;
  for (std::uint64_t bits = 0; bits <= W.all().bits(); ++bits) {
    const GenSet I(bits);
    for (const auto& a : W.enumerate(I, CosetKind::MinimalLeft))
      for (const auto& b : group) out.push_back(OmegaElement{a, I, b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

OmegaElement phi(const HatSystem& h, const VElement& v) {
  if (&v.system() != &h.base()) throw std::invalid_argument("triple does not belong to the base system");
  return OmegaElement{v.a(), v.I(), h.base().inv(v.b())};
}

VElement phi_inv(const HatSystem& h, const OmegaElement& x) { return VElement(x.I, x.a, h.base().inv(x.b)); }

Element phi_prime(const HatSystem& h, const VElement& v) {
  const CoxeterSystem& H = h.hat();
  return H.mul(to_hat(h, phi(h, v)), h.embed(h.base().longest_element()));
}

Element pi_project(const HatSystem& h, const Element& x) { return h.hat().coset_decompose(x, h.S()).first; }

TwistedKL::TwistedKL(const HatSystem& h, DescentPolicy policy)
    : h_(&h), policy_(policy), base_kl_(h.base(), policy), hat_kl_(h.hat(), policy) {}

const std::vector<Element>& TwistedKL::base_up_to(int len) const {
  std::lock_guard lock(mutex_);
  auto it = bounded_.find(len);
  if (it == bounded_.end())
    it = bounded_.emplace(len, h_->base().enumerate(h_->base().all(), CosetKind::Parabolic, len)).first;
  return it->second;
}

LaurentPoly TwistedKL::r_a(const OmegaElement& x, const OmegaElement& y) const {
  const CoxeterSystem& W = h_->base();
  if (&x.a.system() != &W || &y.a.system() != &W) throw std::invalid_argument("Omega element from a different system");
  if (auto hit = ra_.find(x, y)) return *hit;

  LaurentPoly out;
  if (!y.b.is_identity()) {
    // t is a twisted descent of y on the right exactly when l(b t) < l(b).
    const GenSet desc = W.descents(y.b, Side::Right);
    const Gen t = policy_ == DescentPolicy::Smallest ? desc.members().front() : desc.members().back();
    const OmegaElement yt{y.a, y.I, W.right_mul(y.b, t)};
    const OmegaElement xt{x.a, x.I, W.right_mul(x.b, t)};
    out = r_a(xt, yt);
    if (xt.b.length() > x.b.length()) out += LaurentPoly::abar() * r_a(x, yt);
  } else if (W.in_parabolic(x.b, y.I)) {
    const LaurentPoly rz = hat_kl_.r_tilde(h_->z_of(y.I), h_->z_of(x.I));
    if (!rz.is_zero()) out = rz * base_kl_.r_tilde(W.mul(y.a, W.inv(x.b)), x.a);
  }
  return ra_.insert(x, y, std::move(out));
}

LaurentPoly TwistedKL::r_a_generic(const Element& x, const Element& y, int max_depth) const {
  return r_a_generic_impl(x, y, 0, max_depth);
}

LaurentPoly TwistedKL::r_a_generic_impl(const Element& x, const Element& y, int depth, int max_depth) const {
  const CoxeterSystem& H = h_->hat();
  if (auto hit = generic_.find(x, y)) return *hit;
  if (depth > max_depth) throw std::runtime_error("twisted R recursion exceeded depth " + std::to_string(max_depth));

  const int lx = h_->twisted_length(x), ly = h_->twisted_length(y);
  LaurentPoly out;
  if (ly == lx) {
    if (x == y) out = LaurentPoly::one();
  } else if (ly > lx) {
    std::vector<Gen> desc;
    for (Gen s = 0; s < H.rank(); ++s)
      if (h_->twisted_length(H.left_mul(s, y)) < ly) desc.push_back(s);
    if (!desc.empty()) {
      const Gen s = policy_ == DescentPolicy::Smallest ? desc.front() : desc.back();
      const Element sx = H.left_mul(s, x), sy = H.left_mul(s, y);
      out = r_a_generic_impl(sx, sy, depth + 1, max_depth);
      if (h_->twisted_length(sx) > lx) out += LaurentPoly::abar() * r_a_generic_impl(x, sy, depth + 1, max_depth);
    }
  }
  return generic_.insert(x, y, std::move(out));
}

LaurentPoly TwistedKL::r_a_translated(const Element& x, const Element& y) const {
  const CoxeterSystem& H = h_->hat();
  const Element wS = h_->embed(h_->base().longest_element());
  return hat_kl_.r_tilde(H.mul(y, wS), H.mul(x, wS));
}

bool TwistedKL::leq_a_translated(const Element& x, const Element& y) const {
  const CoxeterSystem& H = h_->hat();
  const Element wS = h_->embed(h_->base().longest_element());
  return H.bruhat_leq(H.mul(y, wS), H.mul(x, wS));
}

bool TwistedKL::leq_a(const Element& x, const Element& y) const {
  try {
    return leq_a(omega_decompose(*h_, x), omega_decompose(*h_, y));
  } catch (const NotInOmegaError&) {
    if (!h_->base().is_finite())
      throw InfiniteGroupError("twisted order outside Omega needs a finite base group");
    return leq_a_translated(x, y);
  }
}

std::vector<OmegaElement> TwistedKL::interval(const OmegaElement& x, const OmegaElement& y) const {
  if (!leq_a(x, y)) return {};
  const CoxeterSystem& W = h_->base();
  const GenSet lo = x.I, hi = y.I;
  const int a_bound = x.a.length() + hi.size() - lo.size();
  const int b_bound = omega_length(*h_, y) + h_->n() + a_bound - lo.size();
  const auto& pool = base_up_to(std::max(a_bound, b_bound));
  std::vector<OmegaElement> out;
  const GenSet free = hi - lo;
  std::uint64_t sub = free.bits();
  for (;;) {
    const GenSet K = lo | GenSet(sub);
    for (const auto& a : pool) {
      if (a.length() > a_bound) break;
      if (!W.in_quotient(a, K)) continue;
      const int lb = omega_length(*h_, y) + h_->n() + a.length() - K.size();
      for (const auto& b : pool) {
        if (b.length() > lb) break;
        OmegaElement z{a, K, b};
        if (leq_a(x, z) && leq_a(z, y)) out.push_back(std::move(z));
      }
    }
    if (sub == 0) break;
    sub = (sub - 1) & free.bits();
  }
  std::sort(out.begin(), out.end(), [&](const OmegaElement& p, const OmegaElement& q) {
    const int lp = omega_length(*h_, p), lq = omega_length(*h_, q);
    return lp != lq ? lp < lq : p < q;
  });
  return out;
}

QPoly TwistedKL::p_a(const OmegaElement& x, const OmegaElement& y) const {
  if (!leq_a(x, y)) return {};
  if (auto hit = pa_.find(x, y)) return halve(*hit);
  const auto elems = interval(x, y);
  const std::size_t n = elems.size();
  std::vector<int> lengths(n);
  for (std::size_t i = 0; i < n; ++i) lengths[i] = omega_length(*h_, elems[i]);
  std::vector<LaurentPoly> r(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i * n + j] = r_a(elems[i], elems[j]);
  const KLSolution sol = generic_kl_from_r(lengths, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!r[i * n + j].is_zero()) pa_.insert(elems[i], elems[j], sol.P_at(i, j).in_u());
  return halve(*pa_.find(x, y));
}

QPoly TwistedKL::p_complement(const OmegaElement& x, const OmegaElement& y) const {
  if (!leq_a(y, x)) return {};
  if (auto hit = pc_.find(x, y)) return halve(*hit);
  const auto elems = interval(y, x);
  const std::size_t n = elems.size();
  std::vector<int> lengths(n);
  for (std::size_t i = 0; i < n; ++i) lengths[i] = -omega_length(*h_, elems[i]);
  std::vector<LaurentPoly> r(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i * n + j] = r_a(elems[j], elems[i]);
  const KLSolution sol = generic_kl_from_r(lengths, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!r[i * n + j].is_zero()) pc_.insert(elems[i], elems[j], sol.P_at(i, j).in_u());
  return halve(*pc_.find(x, y));
}

RemarkSides remark_sides(const TwistedKL& kl, const Element& a1, const Element& z1, const Element& a2,
                         const Element& z2, const Element& b2) {
  const HatSystem& h = kl.hat();
  const CoxeterSystem& W = h.base();
  const CoxeterSystem& H = h.hat();
  const GenSet I1 = h.i_of_z(z1), I2 = h.i_of_z(z2);
  if (!W.in_quotient(a1, I1)) throw std::invalid_argument("a1 is not a minimal coset representative for W_I(z1)");
  if (!W.in_quotient(a2, I2)) throw std::invalid_argument("a2 is not a minimal coset representative for W_I(z2)");
  const Element wS = h.embed(W.longest_element());
  const Element lower = H.mul(H.mul(h.embed(a1), z1), wS);
  const Element upper = H.mul(H.mul(H.mul(h.embed(a2), z2), h.embed(b2)), wS);
  RemarkSides sides;
  sides.lhs = kl.hat_kl().r_tilde(lower, upper);
  if (W.in_parabolic(b2, I1))
    sides.rhs = kl.hat_kl().r_tilde(z1, z2) * kl.base_kl().r_tilde(W.mul(a1, W.inv(b2)), a2);
  return sides;
}

std::string format(const HatSystem& h, const OmegaElement& x) {
  const CoxeterSystem& W = h.base();
  std::string I;
  for (Gen s : x.I.members()) I += (I.empty() ? "" : ",") + W.name(s);
  return W.format(x.a) + " * z[" + I + "] * " + W.format(x.b);
}

}  // namespace coxkl
