#include "coxkl/springer.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace coxkl {

VElement::VElement(GenSet I, Element a, Element b) : I_(I), a_(std::move(a)), b_(std::move(b)) {
  const CoxeterSystem& W = a_.system();
  if (&b_.system() != &W) throw std::invalid_argument("triple mixes Coxeter systems");
  if (!I_.is_subset_of(W.all())) throw std::invalid_argument("I is not a subset of S");
  if (!W.in_quotient(a_, I_))
    throw std::invalid_argument("a = " + W.format(a_) + " is not a minimal coset representative for W_" + W.format_set(I_));
}

std::strong_ordering VElement::operator<=>(const VElement& o) const {
  if (auto c = I_.bits() <=> o.I_.bits(); c != 0) return c;
  if (auto c = a_ <=> o.a_; c != 0) return c;
  return b_ <=> o.b_;
}

int v_dim(const VElement& v) { return -v.a().length() + v.b().length() + v.I().size(); }

VElement v_act_left(const Element& x, const VElement& v) {
  const CoxeterSystem& W = v.system();
  auto [head, tail] = W.coset_decompose(W.mul(x, v.a()), v.I());
  return VElement(v.I(), std::move(head), W.mul(v.b(), W.inv(tail)));
}

VElement v_act_right(const Element& y, const VElement& v) {
  return VElement(v.I(), v.a(), v.system().mul(y, v.b()));
}

VElement v_act(PairGenerator g, const VElement& v) {
  const CoxeterSystem& W = v.system();
  if (g.side == Side::Right) return VElement(v.I(), v.a(), W.left_mul(g.s, v.b()));
  const Element sa = W.left_mul(g.s, v.a());
  if (W.in_quotient(sa, v.I())) return VElement(v.I(), sa, v.b());
  // sa = a t with t in I
  const Element t = W.mul(W.inv(v.a()), sa);
  return VElement(v.I(), v.a(), W.mul(v.b(), t));
}

namespace {

void add_to(ModuleElement& m, const VElement& v, const LaurentPoly& c) {
  auto [it, fresh] = m.try_emplace(v, c);
  if (!fresh) it->second += c;
  if (it->second.is_zero()) m.erase(it);
}

}  // namespace

ModuleElement hecke_act(PairGenerator g, const ModuleElement& m) {
  ModuleElement out;
  for (const auto& [v, c] : m) {
    const VElement gv = v_act(g, v);
    add_to(out, gv, c);
    if (v_dim(gv) < v_dim(v)) add_to(out, v, c * LaurentPoly::alpha());
  }
  return out;
}

ModuleElement hecke_act_inverse(PairGenerator g, const ModuleElement& m) {
  ModuleElement out = hecke_act(g, m);
  for (const auto& [v, c] : m) add_to(out, v, -(c * LaurentPoly::alpha()));
  return out;
}

SpringerPoset::SpringerPoset(const CoxeterSystem& system, BRecursion recursion, DescentPolicy policy)
    : system_(&system), recursion_(recursion), policy_(policy), classical_(system, policy) {}

const std::vector<VElement>& SpringerPoset::elements() const {
  std::lock_guard lock(mutex_);
  if (!all_) {
    const CoxeterSystem& W = *system_;
    const auto group = W.enumerate(W.all(), CosetKind::Parabolic);
    std::vector<VElement> out;
    for (std::uint64_t bits = 0; bits <= W.all().bits(); ++bits) {
      const GenSet I(bits);
      for (const auto& a : W.enumerate(I, CosetKind::MinimalLeft))
        for (const auto& b : group) out.emplace_back(I, a, b);
    }
    std::sort(out.begin(), out.end());
    all_ = std::move(out);
  }
  return *all_;
}

const std::vector<Element>& SpringerPoset::elements_up_to(int len) const {
  std::lock_guard lock(mutex_);
  auto it = bounded_.find(len);
  if (it == bounded_.end()) it = bounded_.emplace(len, system_->enumerate(system_->all(), CosetKind::Parabolic, len)).first;
  return it->second;
}

LaurentPoly SpringerPoset::b_poly(const VElement& w, const VElement& v) const {
  const CoxeterSystem& W = *system_;
  if (&w.system() != &W || &v.system() != &W) throw std::invalid_argument("triple belongs to a different Coxeter system");
  if (auto hit = b_.find(w, v)) return *hit;

  LaurentPoly out;
  const bool left_step = recursion_ == BRecursion::Mixed && !v.a().is_identity();
  if (left_step) {
    // sigma = (s,1) with s a2 < a2; sigma.v = [J, s a2, b2] sits one step higher.
    const Gen s = policy_ == DescentPolicy::Smallest ? v.a().word().front()
                                                     : W.descents(v.a(), Side::Left).members().back();
    const PairGenerator sigma{Side::Left, s};
    const VElement up(v.I(), W.left_mul(s, v.a()), v.b());
    const VElement sw = v_act(sigma, w);
    out = b_poly(sw, up);
    if (v_dim(sw) < v_dim(w)) out += LaurentPoly::alpha() * b_poly(w, up);
  } else if (!v.b().is_identity()) {
    const Gen s = policy_ == DescentPolicy::Smallest ? v.b().word().front()
                                                     : W.descents(v.b(), Side::Left).members().back();
    const PairGenerator sigma{Side::Right, s};
    const VElement down(v.I(), v.a(), W.left_mul(s, v.b()));
    const VElement sw = v_act(sigma, w);
    out = b_poly(sw, down);
    if (v_dim(sw) > v_dim(w)) out += LaurentPoly::abar() * b_poly(w, down);
  } else if (w.I().is_subset_of(v.I()) && W.in_parabolic(w.b(), v.I())) {
    const int gap = v.I().size() - w.I().size();
    out = LaurentPoly::abar_power(gap) * classical_.r_tilde(W.mul(v.a(), w.b()), w.a());
  }
  return b_.insert(w, v, std::move(out));
}

bool SpringerPoset::leq1(const VElement& w, const VElement& v) const {
  const CoxeterSystem& W = *system_;
  return w.I().is_subset_of(v.I()) && W.bruhat_leq(v.a(), w.a()) && W.bruhat_leq(w.b(), v.b());
}

bool SpringerPoset::leq2(const VElement& w, const VElement& v) const {
  const CoxeterSystem& W = *system_;
  if (!w.I().is_subset_of(v.I())) return false;
  // b1 = b2 c forces c = b2^-1 b1.
  const Element c = W.mul(W.inv(v.b()), w.b());
  if (!W.in_parabolic(c, v.I())) return false;
  if (w.b().length() != v.b().length() + c.length()) return false;
  return W.bruhat_leq(W.mul(v.a(), c), w.a());
}

std::vector<VElement> SpringerPoset::interval(const VElement& w, const VElement& v) const {
  if (!leq(w, v)) return {};
  const CoxeterSystem& W = *system_;
  const GenSet lo = w.I(), hi = v.I();
  const int a_bound = w.a().length() + hi.size() - lo.size();
  const int b_bound = v_dim(v) + a_bound - lo.size();
  const auto& pool = elements_up_to(std::max(a_bound, b_bound));
  std::vector<VElement> out;
  const GenSet free = hi - lo;
  // Subsets K of hi containing lo: iterate submasks of the free part.
  std::uint64_t sub = free.bits();
  for (;;) {
    const GenSet K = lo | GenSet(sub);
    for (const auto& a : pool) {
      if (a.length() > a_bound) break;
      if (!W.in_quotient(a, K)) continue;
      const int lb = v_dim(v) + a.length() - K.size();
      for (const auto& b : pool) {
        if (b.length() > lb) break;
        VElement z(K, a, b);
        if (leq(w, z) && leq(z, v)) out.push_back(std::move(z));
      }
    }
    if (sub == 0) break;
    sub = (sub - 1) & free.bits();
  }
  std::sort(out.begin(), out.end(), [](const VElement& x, const VElement& y) {
    const int dx = v_dim(x), dy = v_dim(y);
    return dx != dy ? dx < dy : x < y;
  });
  return out;
}

void SpringerPoset::solve_c(const VElement& w, const VElement& v) const {
  const auto elems = interval(w, v);
  const std::size_t n = elems.size();
  std::vector<int> dims(n);
  for (std::size_t i = 0; i < n; ++i) dims[i] = v_dim(elems[i]);
  std::vector<LaurentPoly> r(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i * n + j] = b_poly(elems[i], elems[j]);
  const KLSolution sol = generic_kl_from_r(dims, r);
  const auto inv = kl_inverse(dims, sol.P);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (r[i * n + j].is_zero()) continue;
      c_.insert(elems[i], elems[j], sol.P[i * n + j].in_u());
      c_inv_.insert(elems[i], elems[j], inv[i * n + j].in_u());
    }
}

namespace {

QPoly halve(const LaurentPoly& p) {
  std::vector<Int> coeffs;
  for (const auto& [e, c] : p.terms()) {
    if (coeffs.size() <= static_cast<std::size_t>(e / 2)) coeffs.resize(e / 2 + 1);
    coeffs[e / 2] = c;
  }
  return QPoly(std::move(coeffs));
}

}  // namespace

QPoly SpringerPoset::c_poly(const VElement& w, const VElement& v) const {
  if (!leq(w, v)) return {};
  if (auto hit = c_.find(w, v)) return halve(*hit);
  solve_c(w, v);
  return halve(*c_.find(w, v));
}

QPoly SpringerPoset::c_inv_poly(const VElement& w, const VElement& v) const {
  if (!leq(w, v)) return {};
  if (auto hit = c_inv_.find(w, v)) return halve(*hit);
  solve_c(w, v);
  return halve(*c_inv_.find(w, v));
}

bool SpringerPoset::graph_edge(const VElement& w, const VElement& v) const {
  return b_poly(w, v).derivative_at_one() != 0;
}

bool SpringerPoset::graph_edge_combinatorial(const VElement& w, const VElement& v) const {
  const CoxeterSystem& W = *system_;
  if (w.I() == v.I() && v_dim(w) < v_dim(v)) {
    // w = (1,t).v
    if (w.a() == v.a() && W.is_reflection(W.mul(w.b(), W.inv(v.b())))) return true;
    // w = (t,1).v: b_w = b_v h^-1 with h in W_I and t a_v = a_w h.
    const Element h = W.mul(W.inv(w.b()), v.b());
    if (W.in_parabolic(h, w.I()) && W.is_reflection(W.mul(W.mul(w.a(), h), W.inv(v.a())))) return true;
  }
  if (w.I().is_subset_of(v.I()) && (v.I() - w.I()).size() == 1) {
    const Element f = W.mul(W.inv(v.a()), w.a());
    if (W.in_parabolic(f, v.I()) && w.b() == W.mul(v.b(), f)) return true;
  }
  return false;
}

int SpringerPoset::deodhar_count(const VElement& w, const VElement& z, const VElement& v) const {
  int count = 0;
  for (const auto& y : interval(w, v)) {
    if (y == z) continue;
    if (graph_edge(z, y)) ++count;
    if (graph_edge(y, z)) ++count;
  }
  return count;
}

namespace {

// Indices ordered by the size of their down-set inside the slice; in a poset
// x < y forces a strictly smaller down-set, so this is a linear extension
// that does not rely on d.
std::vector<std::size_t> linear_extension(const std::vector<std::vector<bool>>& le) {
  const std::size_t n = le.size();
  std::vector<std::size_t> below(n, 0), order(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) below[j] += le[i][j];
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return below[a] < below[b]; });
  return order;
}

}  // namespace

std::vector<std::vector<bool>> SpringerPoset::order_matrix(const std::vector<VElement>& elems) const {
  const std::size_t n = elems.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) le[i][j] = i == j || leq(elems[i], elems[j]);
  return le;
}

long SpringerPoset::mobius(const VElement& w, const VElement& v) const {
  const auto elems = interval(w, v);
  if (elems.empty()) return 0;
  const auto le = order_matrix(elems);
  const auto order = linear_extension(le);
  const std::size_t bottom = std::find(elems.begin(), elems.end(), w) - elems.begin();
  const std::size_t top = std::find(elems.begin(), elems.end(), v) - elems.begin();
  std::vector<long> mu(elems.size(), 0);
  for (std::size_t j : order) {
    if (j == bottom) {
      mu[j] = 1;
      continue;
    }
    long sum = 0;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (i != j && le[bottom][i] && le[i][j]) sum += mu[i];
    mu[j] = -sum;
  }
  return mu[top];
}

std::vector<std::pair<std::size_t, std::size_t>> SpringerPoset::hasse(const std::vector<VElement>& elems) const {
  const std::size_t n = elems.size();
  const auto le = order_matrix(elems);
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !le[i][j]) continue;
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k)
        if (k != i && k != j && le[i][k] && le[k][j]) cover = false;
      if (cover) covers.emplace_back(i, j);
    }
  return covers;
}

std::pair<int, int> SpringerPoset::chain_lengths(const VElement& w, const VElement& v) const {
  const auto elems = interval(w, v);
  if (elems.empty()) return {0, 0};
  const std::size_t n = elems.size();
  const auto order = linear_extension(order_matrix(elems));
  std::vector<std::vector<std::size_t>> up(n);
  for (auto [lo, hi] : hasse(elems)) up[lo].push_back(hi);
  const std::size_t bottom = std::find(elems.begin(), elems.end(), w) - elems.begin();
  const std::size_t top = std::find(elems.begin(), elems.end(), v) - elems.begin();
  std::vector<int> shortest(n, 1 << 30), longest(n, -1);
  shortest[bottom] = longest[bottom] = 1;
  for (std::size_t i : order) {
    if (longest[i] < 0) continue;
    for (std::size_t j : up[i]) {
      shortest[j] = std::min(shortest[j], shortest[i] + 1);
      longest[j] = std::max(longest[j], longest[i] + 1);
    }
  }
  return {shortest[top], longest[top]};
}

std::string format(const VElement& v) {
  const CoxeterSystem& W = v.system();
  return "[I=" + W.format_set(v.I()) + "; a=" + W.format_compact(v.a()) + "; b=" + W.format_compact(v.b()) + "]";
}

}  // namespace coxkl
