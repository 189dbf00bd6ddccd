#include "coxkl/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "coxkl/errors.hpp"
#include "coxkl/finite_group.hpp"
#include "coxkl/kl.hpp"
#include "coxkl/springer.hpp"

namespace coxkl {

SuiteReport::SuiteReport(std::string suite, std::string config_digest)
    : suite_(std::move(suite)), config_digest_(std::move(config_digest)) {}

void SuiteReport::check(std::string name, json inputs, json expected, json actual) {
  const bool pass = expected == actual;
  passed_ += pass;
  cases_.push_back(SuiteCase{std::move(name), std::move(inputs), std::move(expected), std::move(actual), pass});
}

json SuiteReport::to_json() const {
  json cases = json::array();
  for (const auto& c : cases_)
    cases.push_back({{"name", c.name}, {"inputs", c.inputs}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
  return json{{"suite", suite_},
              {"version", COXKL_VERSION},
              {"config_digest", config_digest_},
              {"duration_seconds", seconds_},
              {"counts", {{"total", cases_.size()}, {"passed", passed_}, {"failed", failed()}}},
              {"pass", ok()},
              {"notes", notes_},
              {"cases", std::move(cases)}};
}

std::string SuiteReport::to_text(std::size_t max_failures) const {
  std::ostringstream out;
  out << suite_ << ": " << (ok() ? "PASS" : "FAIL") << "  " << passed_ << "/" << cases_.size() << " cases";
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "  " << seconds_ << " s  [coxkl " << COXKL_VERSION << ", config " << config_digest_ << "]\n";
  for (const auto& n : notes_) out << "  note: " << n << '\n';
  std::size_t shown = 0;
  for (const auto& c : cases_) {
    if (c.pass) continue;
    if (shown++ == max_failures) {
      out << "  ... " << failed() - max_failures << " more failures\n";
      break;
    }
    out << "  FAILED " << c.name << " " << c.inputs.dump() << "\n    expected " << c.expected.dump() << "\n    actual   "
        << c.actual.dump() << '\n';
  }
  return out.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "iso",     "lengths",       "b-dual-route",   "involution",         "finite-classical",      "hat-invariance",
      "purity-mobius", "graph-deodhar", "remark", "enumeration-invariance", "classical-oracle", "group-engine"};
  return names;
}

bool suite_needs_finite(const std::string& suite) {
  return suite == "finite-classical" || suite == "graph-deodhar" || suite == "remark" || suite == "classical-oracle";
}

std::unique_ptr<CoxeterSystem> reversed_system(const CoxeterSystem& W) {
  const int n = W.rank();
  std::vector<std::string> names(W.generator_names().rbegin(), W.generator_names().rend());
  std::vector<std::vector<int>> m(n, std::vector<int>(n));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) m[r][s] = W.bond(n - 1 - r, n - 1 - s);
  return std::make_unique<CoxeterSystem>(std::move(names), std::move(m));
}

namespace {

using Pair = std::pair<std::size_t, std::size_t>;

// Largest |V| for which suites build dense |V| x |V| tables.
constexpr std::size_t kDenseLimit = 400;

json pj(const LaurentPoly& p) { return poly_u_json(p); }
json qj(const QPoly& p) { return poly_q_json(p); }

std::vector<VElement> universe(const CoxeterSystem& W, int max_length) {
  const bool finite = W.is_finite();
  const auto group = finite ? W.enumerate(W.all(), CosetKind::Parabolic)
                            : W.enumerate(W.all(), CosetKind::Parabolic, max_length);
  std::vector<VElement> out;
  for (std::uint64_t bits = 0; bits <= W.all().bits(); ++bits) {
    const GenSet I(bits);
    const auto quotient = finite ? W.enumerate(I, CosetKind::MinimalLeft) : W.enumerate(I, CosetKind::MinimalLeft, max_length);
    for (const auto& a : quotient)
      for (const auto& b : group) out.emplace_back(I, a, b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Context {
  Context(const CoxeterSystem& system, const HatConfig& config, const VerifyOptions& options)
      : W(system),
        hat_config(config),
        h(system, config),
        V(system),
        T(h),
        opt(options),
        rng(options.seed),
        finite(system.is_finite()),
        elems(universe(system, options.max_length)) {}

  std::size_t cap(std::size_t base) const { return opt.slow ? base * 10 : base; }
  std::size_t samples(std::size_t fallback) const { return opt.samples ? opt.samples : fallback; }

  void need_finite(const std::string& suite) const {
    if (!finite) throw InfiniteGroupError(suite + " needs a finite Coxeter group");
  }

  std::size_t index(const VElement& v) const {
    return std::lower_bound(elems.begin(), elems.end(), v) - elems.begin();
  }

  const LaurentPoly& b(std::size_t i, std::size_t j) {
    const std::size_t n = elems.size();
    if (bmat.empty()) {
      bmat.resize(n * n);
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) bmat[p * n + q] = V.b_poly(elems[p], elems[q]);
    }
    return bmat[i * n + j];
  }

  // Walks down from v by d-lowering moves of the W x W action and by
  // dropping one generator from I, giving pairs that are often comparable.
  std::size_t walk_down(std::size_t start) {
    VElement v = elems[start];
    std::uniform_int_distribution<int> steps(1, 4);
    for (int k = steps(rng); k > 0; --k) {
      std::vector<VElement> moves;
      for (Gen s = 0; s < W.rank(); ++s)
        for (Side side : {Side::Left, Side::Right}) {
          VElement u = v_act(PairGenerator{side, s}, v);
          if (v_dim(u) < v_dim(v)) moves.push_back(std::move(u));
        }
      for (Gen r : v.I().members()) {
        GenSet I = v.I();
        I.erase(r);
        moves.emplace_back(I, v.a(), v.b());
      }
      if (moves.empty()) break;
      VElement next = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
      if (!std::binary_search(elems.begin(), elems.end(), next)) break;
      v = std::move(next);
    }
    return index(v);
  }

  /// All pairs when there are at most `limit` of them, otherwise `count`
  /// sampled pairs: half uniform, half from downward walks.
  std::vector<Pair> pairs(std::size_t limit, std::size_t count) {
    const std::size_t n = elems.size();
    std::vector<Pair> out;
    if (n * n <= limit) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.emplace_back(i, j);
      return out;
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::set<Pair> seen;
    for (std::size_t tries = 0; seen.size() < count && tries < 20 * count; ++tries) {
      const std::size_t j = pick(rng);
      const std::size_t i = (tries % 2 == 0) ? pick(rng) : walk_down(j);
      seen.emplace(i, j);
    }
    return {seen.begin(), seen.end()};
  }

  /// Comparable pairs, all or `count` sampled from the full list.
  std::vector<Pair> comparable(const std::vector<Pair>& from, std::size_t limit, std::size_t count) {
    std::vector<Pair> out;
    for (auto [i, j] : from)
      if (V.leq(elems[i], elems[j])) out.emplace_back(i, j);
    if (out.size() <= limit) return out;
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(count);
    std::sort(out.begin(), out.end());
    return out;
  }

  json vj(std::size_t i) const { return velement_text(elems[i]); }
  json pair_json(std::size_t i, std::size_t j) const { return json{{"w", vj(i)}, {"v", vj(j)}}; }

  Element hat_of(const VElement& v) const { return to_hat(h, phi(h, v)); }

  const CoxeterSystem& W;
  HatConfig hat_config;
  HatSystem h;
  SpringerPoset V;
  TwistedKL T;
  VerifyOptions opt;
  std::mt19937_64 rng;
  bool finite;
  std::vector<VElement> elems;
  std::vector<LaurentPoly> bmat;
};

// Transitive closure of leq1 u leq2: the generating relations of the order.
std::vector<std::vector<bool>> closure_oracle(Context& ctx) {
  const auto& E = ctx.elems;
  const std::size_t n = E.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) le[i][j] = i == j || ctx.V.leq1(E[i], E[j]) || ctx.V.leq2(E[i], E[j]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = true;
  return le;
}

std::size_t omega_count(const CoxeterSystem& W) {
  const std::size_t group = W.enumerate(W.all(), CosetKind::Parabolic).size();
  std::size_t total = 0;
  for (std::uint64_t bits = 0; bits <= W.all().bits(); ++bits)
    total += W.enumerate(GenSet(bits), CosetKind::MinimalLeft).size() * group;
  return total;
}

void suite_iso(Context& ctx, SuiteReport& rep) {
  const auto& E = ctx.elems;
  const CoxeterSystem& H = ctx.h.hat();
  if (ctx.finite) {
    const std::size_t expected = omega_count(ctx.W);
    rep.check("|V|", json::object(), expected, E.size());
    rep.check("|Omega|", json::object(), expected, omega_enumerate(ctx.h).size());
  }
  std::set<Word> images;
  for (std::size_t i = 0; i < E.size(); ++i) {
    const OmegaElement x = phi(ctx.h, E[i]);
    const Element hx = to_hat(ctx.h, x);
    images.insert(hx.word());
    rep.check("phi_inv(phi(v)) = v", {{"v", ctx.vj(i)}}, ctx.vj(i), velement_text(phi_inv(ctx.h, x)));
    rep.check("decompose(phi(v)) = phi(v)", {{"v", ctx.vj(i)}}, format(ctx.h, x), format(ctx.h, omega_decompose(ctx.h, hx)));
    for (Gen s = 0; s < ctx.W.rank(); ++s) {
      const Element left = ctx.hat_of(v_act(PairGenerator{Side::Left, s}, E[i]));
      const Element right = ctx.hat_of(v_act(PairGenerator{Side::Right, s}, E[i]));
      rep.check("phi((s,1).v) = s phi(v)", {{"v", ctx.vj(i)}, {"s", ctx.W.name(s)}}, H.format(H.left_mul(s, hx)), H.format(left));
      rep.check("phi((1,s).v) = phi(v) s", {{"v", ctx.vj(i)}, {"s", ctx.W.name(s)}}, H.format(H.right_mul(hx, s)), H.format(right));
    }
  }
  rep.check("phi injective", json::object(), E.size(), images.size());

  if (!ctx.finite) {
    rep.note("W is infinite: the order is compared on pairs with length bound " + std::to_string(ctx.opt.max_length) +
             " against b-tilde != 0 and the generating relations");
    for (auto [i, j] : ctx.pairs(ctx.cap(20000), ctx.samples(1000))) {
      const bool expected = ctx.V.leq(E[i], E[j]);
      rep.check("w <= v iff phi(w) <=_A phi(v)", ctx.pair_json(i, j), expected,
                ctx.T.leq_a(phi(ctx.h, E[i]), phi(ctx.h, E[j])));
      if (ctx.V.leq1(E[i], E[j]) || ctx.V.leq2(E[i], E[j]))
        rep.check("generating relation implies b-tilde != 0", ctx.pair_json(i, j), true, expected);
    }
    return;
  }
  const auto le = closure_oracle(ctx);
  for (auto [i, j] : ctx.pairs(ctx.cap(20000), ctx.samples(1000))) {
    const bool expected = le[i][j];
    const OmegaElement x = phi(ctx.h, E[i]), y = phi(ctx.h, E[j]);
    rep.check("closure of leq1, leq2 = (b-tilde != 0)", ctx.pair_json(i, j), expected, ctx.V.leq(E[i], E[j]));
    rep.check("closure of leq1, leq2 = (R^A != 0)", ctx.pair_json(i, j), expected, ctx.T.leq_a(x, y));
    rep.check("closure of leq1, leq2 = translated Bruhat", ctx.pair_json(i, j), expected,
              ctx.T.leq_a_translated(to_hat(ctx.h, x), to_hat(ctx.h, y)));
  }
}

void suite_lengths(Context& ctx, SuiteReport& rep) {
  const int n = ctx.W.rank();
  const CoxeterSystem& H = ctx.h.hat();
  std::vector<OmegaElement> omega;
  if (ctx.finite) omega = omega_enumerate(ctx.h);
  else for (const auto& v : ctx.elems) omega.push_back(phi(ctx.h, v));
  for (const auto& x : omega)
    rep.check("twisted length of a z_I b", {{"x", format(ctx.h, x)}}, omega_length(ctx.h, x),
              ctx.h.twisted_length(to_hat(ctx.h, x)));
  for (std::size_t i = 0; i < ctx.elems.size(); ++i) {
    const VElement& v = ctx.elems[i];
    rep.check("l_A(phi(v)) = d(v) - |S|", {{"v", ctx.vj(i)}}, v_dim(v) - n, ctx.h.twisted_length(ctx.hat_of(v)));
    if (ctx.finite)
      rep.check("l(phi'(v)) = -d(v) + |S| + l(w_S)", {{"v", ctx.vj(i)}},
                -v_dim(v) + n + ctx.W.longest_element().length(), phi_prime(ctx.h, v).length());
  }
  for (const auto& z : H.enumerate(ctx.h.R(), CosetKind::Parabolic, n))
    rep.check("I_z by commuting support = S n z S z^-1", {{"z", H.format(z)}}, H.format_set(ctx.h.i_of_z_by_conjugation(z)),
              H.format_set(ctx.h.i_of_z(z)));
}

void suite_b_dual_route(Context& ctx, SuiteReport& rep) {
  SpringerPoset mixed(ctx.W, BRecursion::Mixed);
  const bool generic = ctx.h.hat().is_finite();
  if (!generic) rep.note("hat group is infinite: the generic twisted recursion is not run");
  const auto& E = ctx.elems;
  for (auto [i, j] : ctx.pairs(ctx.cap(20000), ctx.samples(1000))) {
    const LaurentPoly b = ctx.V.b_poly(E[i], E[j]);
    const OmegaElement x = phi(ctx.h, E[i]), y = phi(ctx.h, E[j]);
    const LaurentPoly ra = ctx.T.r_a(x, y);
    rep.check("b-tilde(w,v) = R^A(phi(w),phi(v))", ctx.pair_json(i, j), pj(b), pj(ra));
    if (generic)
      rep.check("R^A closed form = generic recursion", ctx.pair_json(i, j), pj(ra),
                pj(ctx.T.r_a_generic(to_hat(ctx.h, x), to_hat(ctx.h, y))));
    rep.check("right recursion = mixed recursion", ctx.pair_json(i, j), pj(b), pj(mixed.b_poly(E[i], E[j])));
    if (!b.is_zero())
      rep.check("monic of degree d(v) - d(w)", ctx.pair_json(i, j), true, b.is_monic_in_abar(v_dim(E[j]) - v_dim(E[i])));
  }
}

json module_json(const ModuleElement& m) {
  json out = json::object();
  for (const auto& [v, c] : m) out[velement_text(v)] = pj(c);
  return out;
}

void suite_involution(Context& ctx, SuiteReport& rep) {
  const auto& E = ctx.elems;
  // The dense b-tilde matrix is quadratic in |V|; past a few hundred
  // elements the sums run over the interval instead.
  const bool dense = ctx.finite && E.size() <= kDenseLimit;
  if (!ctx.finite) rep.note("W is infinite: sums run over the enumerated interval [w,v]");
  else if (!dense) rep.note("|V| = " + std::to_string(E.size()) + ": sums run over the enumerated interval [w,v]");
  for (auto [i, j] : ctx.pairs(ctx.cap(20000), ctx.samples(500))) {
    LaurentPoly b_sum, ra_sum;
    const OmegaElement x = phi(ctx.h, E[i]), y = phi(ctx.h, E[j]);
    if (dense) {
      for (std::size_t k = 0; k < E.size(); ++k) {
        const LaurentPoly& left = ctx.b(i, k);
        if (left.is_zero()) continue;
        b_sum += left * ctx.b(k, j).bar();
      }
      for (std::size_t k = 0; k < E.size(); ++k) {
        const OmegaElement z = phi(ctx.h, E[k]);
        const LaurentPoly left = ctx.T.r_a(x, z);
        if (left.is_zero()) continue;
        ra_sum += left * ctx.T.r_a(z, y).bar();
      }
    } else {
      for (const auto& z : ctx.V.interval(E[i], E[j])) b_sum += ctx.V.b_poly(E[i], z) * ctx.V.b_poly(z, E[j]).bar();
      for (const auto& z : ctx.T.interval(x, y)) ra_sum += ctx.T.r_a(x, z) * ctx.T.r_a(z, y).bar();
    }
    const LaurentPoly delta = i == j ? LaurentPoly::one() : LaurentPoly();
    rep.check("sum_z b(w,z)(u) b(z,v)(u^-1) = delta", ctx.pair_json(i, j), pj(delta), pj(b_sum));
    rep.check("sum_z R^A(x,z)(u) R^A(z,y)(u^-1) = delta", ctx.pair_json(i, j), pj(delta), pj(ra_sum));
  }
  for (std::size_t i = 0; i < E.size(); ++i)
    for (Gen s = 0; s < ctx.W.rank(); ++s)
      for (Side side : {Side::Left, Side::Right}) {
        const PairGenerator g{side, s};
        const ModuleElement m{{E[i], LaurentPoly::one()}};
        const ModuleElement once = hecke_act(g, m);
        const ModuleElement twice = hecke_act(g, once);
        ModuleElement expected = m;
        for (const auto& [v, c] : once) {
          auto [it, fresh] = expected.try_emplace(v, c * LaurentPoly::alpha());
          if (!fresh) it->second += c * LaurentPoly::alpha();
          if (it->second.is_zero()) expected.erase(it);
        }
        const json inputs{{"v", ctx.vj(i)}, {"g", (side == Side::Left ? "(" + ctx.W.name(s) + ",1)" : "(1," + ctx.W.name(s) + ")")}};
        rep.check("T^2 = alpha T + 1", inputs, module_json(expected), module_json(twice));
        rep.check("T^-1 T = 1", inputs, module_json(m), module_json(hecke_act_inverse(g, once)));
      }
}

void suite_finite_classical(Context& ctx, SuiteReport& rep) {
  ctx.need_finite("finite-classical");
  const auto& E = ctx.elems;
  const HatSystem& h = ctx.h;
  const CoxeterSystem& H = h.hat();
  const ClassicalKL& hk = ctx.T.hat_kl();
  const Element wS = h.embed(ctx.W.longest_element());
  const Element top = H.mul(H.mul(wS, h.z_of(GenSet())), wS);

  std::vector<Element> prime;
  for (const auto& v : E) prime.push_back(phi_prime(h, v));
  std::set<Element> image(prime.begin(), prime.end());
  std::set<Element> lower;
  for (const auto& x : H.enumerate(H.all(), CosetKind::Parabolic, top.length()))
    if (H.bruhat_leq(x, top)) lower.insert(x);
  rep.check("|image of phi'| = |[1, w_S z_0 w_S]|", {{"top", H.format(top)}}, lower.size(), image.size());
  rep.check("image of phi' = [1, w_S z_0 w_S]", {{"top", H.format(top)}}, true, image == lower);

  const auto all = ctx.pairs(ctx.cap(20000), ctx.samples(1000));
  for (auto [i, j] : all) {
    rep.check("w <= v iff phi'(v) <= phi'(w)", ctx.pair_json(i, j), ctx.V.leq(E[i], E[j]), H.bruhat_leq(prime[j], prime[i]));
    rep.check("b-tilde(w,v) = R~(phi'(v),phi'(w))", ctx.pair_json(i, j), pj(ctx.V.b_poly(E[i], E[j])),
              pj(hk.r_tilde(prime[j], prime[i])));
  }

  std::size_t literal = 0, off_diagonal = 0;
  const auto comp = ctx.comparable(all, ctx.cap(5000), ctx.samples(300));
  for (auto [i, j] : comp) {
    const QPoly c = ctx.V.c_poly(E[i], E[j]), ci = ctx.V.c_inv_poly(E[i], E[j]);
    const OmegaElement x = phi(h, E[i]), y = phi(h, E[j]);
    rep.check("c(w,v) = Q(phi'(v),phi'(w))", ctx.pair_json(i, j), qj(c), qj(hk.kl_q(prime[j], prime[i])));
    rep.check("c_inv(w,v) = P(phi'(v),phi'(w))", ctx.pair_json(i, j), qj(ci), qj(hk.kl_p(prime[j], prime[i])));
    rep.check("c(w,v) = P_A(phi(w),phi(v))", ctx.pair_json(i, j), qj(c), qj(ctx.T.p_a(x, y)));
    rep.check("c_inv(w,v) = P_{T+A}(phi(v),phi(w))", ctx.pair_json(i, j), qj(ci), qj(ctx.T.p_complement(y, x)));
    if (i != j) {
      ++off_diagonal;
      literal += ctx.T.p_a(y, x) == c;
    }
  }
  rep.note("orientation: c(w,v) = P_A(phi(w),phi(v)) holds on all " + std::to_string(comp.size()) +
           " checked pairs; the reading c(w,v) = P_A(phi(v),phi(w)) agrees on " + std::to_string(literal) + " of " +
           std::to_string(off_diagonal) + " off-diagonal pairs");

  std::size_t reversed_nonzero = 0, strict = 0;
  const GenSet S = h.S();
  for (std::uint64_t jb = 0; jb <= S.bits(); ++jb)
    for (std::uint64_t ib = 0; ib <= S.bits(); ++ib) {
      const GenSet I(ib), J(jb);
      if (!I.is_subset_of(J)) continue;
      const Element zI = h.z_of(I), zJ = h.z_of(J);
      rep.check("R~(z_J,z_I) = abar^(|J|-|I|) for I in J", {{"I", H.format_set(I)}, {"J", H.format_set(J)}},
                pj(LaurentPoly::abar_power(J.size() - I.size())), pj(hk.r_tilde(zJ, zI)));
      if (I != J) {
        ++strict;
        reversed_nonzero += !hk.r_tilde(zI, zJ).is_zero();
      }
    }
  rep.note("z factor orientation: R~(z_J,z_I) carries the power of abar; R~(z_I,z_J) is nonzero on " +
           std::to_string(reversed_nonzero) + " of " + std::to_string(strict) + " strict inclusions");
}

std::vector<std::pair<std::string, HatConfig>> hat_variants(const Context& ctx) {
  std::vector<std::pair<std::string, HatConfig>> out;
  out.emplace_back("default", HatConfig{});
  out.emplace_back("given", ctx.hat_config);
  HatConfig four, inf;
  for (const auto& name : ctx.W.generator_names()) {
    four.hat_bonds[name] = 4;
    inf.hat_bonds[name] = kInfinity;
  }
  out.emplace_back("m(r,theta r) = 4", four);
  out.emplace_back("m(r,theta r) = inf", inf);
  if (ctx.W.rank() >= 2) {
    HatConfig theta;
    theta.theta_bonds.emplace_back(ctx.W.name(0), ctx.W.name(1), 3);
    out.emplace_back("m(theta r1, theta r2) = 3", theta);
  }
  return out;
}

void suite_hat_invariance(Context& ctx, SuiteReport& rep) {
  const auto& E = ctx.elems;
  const auto variants = hat_variants(ctx);
  std::vector<std::unique_ptr<HatSystem>> hats;
  std::vector<std::unique_ptr<TwistedKL>> kls;
  for (const auto& [label, config] : variants) {
    hats.push_back(std::make_unique<HatSystem>(ctx.W, config));
    kls.push_back(std::make_unique<TwistedKL>(*hats.back()));
    rep.note("hat '" + label + "': " + hats.back()->hat().finite_type(hats.back()->hat().all()).value_or("infinite"));
  }
  const auto all = ctx.pairs(ctx.cap(20000), ctx.samples(1000));
  for (auto [i, j] : all) {
    const json b = pj(ctx.V.b_poly(E[i], E[j]));
    for (std::size_t k = 0; k < variants.size(); ++k) {
      json inputs = ctx.pair_json(i, j);
      inputs["hat"] = variants[k].first;
      rep.check("b-tilde(w,v) = R^A(phi(w),phi(v))", inputs, b,
                pj(kls[k]->r_a(phi(*hats[k], E[i]), phi(*hats[k], E[j]))));
    }
  }
  for (auto [i, j] : ctx.comparable(all, ctx.cap(2000), ctx.samples(300))) {
    const json c = qj(ctx.V.c_poly(E[i], E[j]));
    for (std::size_t k = 0; k < variants.size(); ++k) {
      json inputs = ctx.pair_json(i, j);
      inputs["hat"] = variants[k].first;
      rep.check("c(w,v) = P_A(phi(w),phi(v))", inputs, c, qj(kls[k]->p_a(phi(*hats[k], E[i]), phi(*hats[k], E[j]))));
    }
  }
}

void suite_purity_mobius(Context& ctx, SuiteReport& rep) {
  const auto& E = ctx.elems;
  constexpr int kMaxGap = 4;
  std::vector<Pair> pool;
  for (auto [i, j] : ctx.pairs(ctx.cap(20000), ctx.samples(2000)))
    if (v_dim(E[j]) - v_dim(E[i]) <= kMaxGap && ctx.V.leq(E[i], E[j])) pool.emplace_back(i, j);
  for (auto [i, j] : pool) {
    const int gap = v_dim(E[j]) - v_dim(E[i]);
    json inputs = ctx.pair_json(i, j);
    inputs["gap"] = gap;
    const auto [shortest, longest] = ctx.V.chain_lengths(E[i], E[j]);
    rep.check("every maximal chain has gap + 1 elements", inputs, json::array({gap + 1, gap + 1}), json::array({shortest, longest}));
    rep.check("mobius = (-1)^gap", inputs, gap % 2 ? -1 : 1, ctx.V.mobius(E[i], E[j]));
  }
}

// Edges only join comparable elements, so paths from w to v and the edge
// counts at z stay inside [w,v]. Used when |V| is too large for dense
// pair matrices.
void graph_deodhar_sampled(Context& ctx, SuiteReport& rep) {
  const auto& E = ctx.elems;
  const auto chosen = ctx.comparable(ctx.pairs(0, ctx.samples(300)), ctx.samples(100), ctx.samples(100));
  rep.note("|V| = " + std::to_string(E.size()) + ": " + std::to_string(chosen.size()) +
           " sampled comparable pairs, each checked on its interval");
  for (auto [i, j] : chosen) {
    const auto I = ctx.V.interval(E[i], E[j]);
    const std::size_t m = I.size();
    std::vector<std::vector<bool>> edge(m, std::vector<bool>(m));
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q) {
        edge[p][q] = ctx.V.b_poly(I[p], I[q]).derivative_at_one() != 0;
        rep.check("derivative edge = combinatorial edge", json{{"w", velement_text(I[p])}, {"v", velement_text(I[q])}},
                  static_cast<bool>(edge[p][q]), ctx.V.graph_edge_combinatorial(I[p], I[q]));
      }
    const std::size_t w = std::find(I.begin(), I.end(), E[i]) - I.begin();
    const std::size_t v = std::find(I.begin(), I.end(), E[j]) - I.begin();
    std::vector<bool> seen(m);
    std::vector<std::size_t> stack{w};
    seen[w] = true;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      for (std::size_t q = 0; q < m; ++q)
        if (edge[k][q] && !seen[q]) {
          seen[q] = true;
          stack.push_back(q);
        }
    }
    rep.check("w <= v iff a path w -> v", ctx.pair_json(i, j), true, static_cast<bool>(v < m && seen[v]));
    const int gap = v_dim(E[j]) - v_dim(E[i]);
    for (std::size_t z = 0; z < m; ++z) {
      int count = 0;
      for (std::size_t y = 0; y < m; ++y)
        if (y != z) count += edge[z][y] + edge[y][z];
      json inputs{{"w", ctx.vj(i)}, {"z", velement_text(I[z])}, {"v", ctx.vj(j)}, {"edges", count}, {"gap", gap}};
      rep.check("edges at z within [w,v] >= d(v) - d(w)", inputs, true, count >= gap);
    }
  }
}

void suite_graph_deodhar(Context& ctx, SuiteReport& rep) {
  ctx.need_finite("graph-deodhar");
  const auto& E = ctx.elems;
  const std::size_t n = E.size();
  if (n > kDenseLimit) {
    graph_deodhar_sampled(ctx, rep);
    return;
  }
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n)), le(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      le[i][j] = !ctx.b(i, j).is_zero();
      edge[i][j] = ctx.b(i, j).derivative_at_one() != 0;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rep.check("derivative edge = combinatorial edge", ctx.pair_json(i, j), static_cast<bool>(edge[i][j]),
                ctx.V.graph_edge_combinatorial(E[i], E[j]));

  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> stack{i};
    reach[i][i] = true;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j)
        if (edge[k][j] && !reach[i][j]) {
          reach[i][j] = true;
          stack.push_back(j);
        }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rep.check("w <= v iff a path w -> v", ctx.pair_json(i, j), static_cast<bool>(le[i][j]), static_cast<bool>(reach[i][j]));

  std::size_t routine_checks = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!le[i][j]) continue;
      const int gap = v_dim(E[j]) - v_dim(E[i]);
      for (std::size_t z = 0; z < n; ++z) {
        if (!le[i][z] || !le[z][j]) continue;
        int count = 0;
        for (std::size_t y = 0; y < n; ++y)
          if (y != z && le[i][y] && le[y][j]) count += edge[z][y] + edge[y][z];
        json inputs{{"w", ctx.vj(i)}, {"z", ctx.vj(z)}, {"v", ctx.vj(j)}, {"edges", count}, {"gap", gap}};
        rep.check("edges at z within [w,v] >= d(v) - d(w)", inputs, true, count >= gap);
        if (routine_checks < 200 && i != j) {
          ++routine_checks;
          rep.check("deodhar_count", inputs, count, ctx.V.deodhar_count(E[i], E[z], E[j]));
        }
      }
    }
}

void suite_remark(Context& ctx, SuiteReport& rep) {
  ctx.need_finite("remark");
  const HatSystem& h = ctx.h;
  const CoxeterSystem& H = h.hat();
  const CoxeterSystem& W = ctx.W;
  const bool finite_r = H.is_finite(h.R());
  const auto zs = finite_r ? H.enumerate(h.R(), CosetKind::Parabolic) : H.enumerate(h.R(), CosetKind::Parabolic, W.rank() + 1);
  if (!finite_r) rep.note("W^_theta(S) is infinite: z runs over elements of length <= |S| + 1");
  const auto group = W.enumerate(W.all(), CosetKind::Parabolic);

  struct Side { Element z; Element a; };
  std::vector<Side> sides;
  for (const auto& z : zs)
    for (const auto& a : W.enumerate(h.i_of_z(z), CosetKind::MinimalLeft)) sides.push_back(Side{z, a});

  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> tuples;
  const std::size_t total = sides.size() * sides.size() * group.size();
  if (total <= ctx.cap(5000)) {
    for (std::size_t p = 0; p < sides.size(); ++p)
      for (std::size_t q = 0; q < sides.size(); ++q)
        for (std::size_t k = 0; k < group.size(); ++k) tuples.emplace_back(p, q, k);
  } else {
    std::uniform_int_distribution<std::size_t> ps(0, sides.size() - 1), gs(0, group.size() - 1);
    for (std::size_t t = 0; t < ctx.samples(200); ++t) tuples.emplace_back(ps(ctx.rng), ps(ctx.rng), gs(ctx.rng));
  }
  for (auto [p, q, k] : tuples) {
    const auto& [z1, a1] = sides[p];
    const auto& [z2, a2] = sides[q];
    const RemarkSides r = remark_sides(ctx.T, a1, z1, a2, z2, group[k]);
    json inputs{{"a1", W.format(a1)}, {"z1", H.format(z1)}, {"a2", W.format(a2)}, {"z2", H.format(z2)}, {"b2", W.format(group[k])}};
    rep.check("R~(a1 z1 w_S, a2 z2 b2 w_S) factorization", inputs, pj(r.rhs), pj(r.lhs));
  }
}

void suite_enumeration_invariance(Context& ctx, SuiteReport& rep) {
  const auto W2 = reversed_system(ctx.W);
  const HatSystem h2(*W2, ctx.hat_config);
  const TwistedKL T2(h2);
  SpringerPoset V2(*W2);
  auto translate = [&](const Element& x) {
    std::vector<std::string> names;
    for (Gen s : x.word()) names.push_back(ctx.W.name(s));
    return W2->reduce_names(names);
  };
  auto move = [&](const VElement& v) {
    GenSet I;
    for (Gen s : v.I().members()) I.insert(W2->generator_index(ctx.W.name(s)));
    return VElement(I, translate(v.a()), translate(v.b()));
  };
  const auto& E = ctx.elems;
  const auto all = ctx.pairs(ctx.cap(20000), ctx.samples(1000));
  for (auto [i, j] : all) {
    const VElement w2 = move(E[i]), v2 = move(E[j]);
    const json b = pj(ctx.V.b_poly(E[i], E[j]));
    rep.check("b-tilde under the reversed enumeration", ctx.pair_json(i, j), b, pj(V2.b_poly(w2, v2)));
    rep.check("R^A under the reversed enumeration", ctx.pair_json(i, j), b, pj(T2.r_a(phi(h2, w2), phi(h2, v2))));
  }
  for (auto [i, j] : ctx.comparable(all, ctx.cap(2000), ctx.samples(300)))
    rep.check("c under the reversed enumeration", ctx.pair_json(i, j), qj(ctx.V.c_poly(E[i], E[j])),
              qj(V2.c_poly(move(E[i]), move(E[j]))));
}

void suite_classical_oracle(Context& ctx, SuiteReport& rep) {
  ctx.need_finite("classical-oracle");
  const CoxeterSystem& W = ctx.W;
  const FiniteCoxeterGroup G(W);
  const ClassicalKL kl(W);
  const Element w0 = W.longest_element();
  std::vector<Word> words;
  if (w0.length() <= 10) {
    words = reduced_words(W, w0);
  } else {
    words.push_back(w0.word());
    words.emplace_back(w0.word().rbegin(), w0.word().rend());
  }
  std::vector<std::pair<FiniteCoxeterGroup::Index, FiniteCoxeterGroup::Index>> intervals;
  const bool exhaustive = words.size() <= 8 && G.size() * G.size() <= ctx.cap(20000);
  if (exhaustive) {
    for (FiniteCoxeterGroup::Index y = 0; y < G.size(); ++y)
      for (FiniteCoxeterGroup::Index x = 0; x < G.size(); ++x)
        if (G.leq(x, y)) intervals.emplace_back(x, y);
  } else {
    if (words.size() > 3) words = {words.front(), words[words.size() / 2], words.back()};
    std::uniform_int_distribution<FiniteCoxeterGroup::Index> pick(0, static_cast<FiniteCoxeterGroup::Index>(G.size() - 1));
    while (intervals.size() < ctx.samples(100)) {
      const auto y = pick(ctx.rng);
      std::vector<FiniteCoxeterGroup::Index> below;
      for (FiniteCoxeterGroup::Index x = 0; x < G.size(); ++x)
        if (G.leq(x, y)) below.push_back(x);
      intervals.emplace_back(below[std::uniform_int_distribution<std::size_t>(0, below.size() - 1)(ctx.rng)], y);
    }
  }
  rep.note(std::to_string(words.size()) + " reduced words of w0, " + std::to_string(intervals.size()) + " intervals");
  for (const auto& word : words) {
    const ReflectionOrder order = reflection_order_from_w0(W, word);
    std::string wtext;
    for (Gen g : word) wtext += (wtext.empty() ? "" : ",") + W.name(g);
    if (W.uses_integer_cartan()) rep.check("reflection order from a reduced word of w0", {{"word", wtext}}, true, is_reflection_order(W, order));
    for (auto [x, y] : intervals) {
      const Element& ex = G.element(x);
      const Element& ey = G.element(y);
      rep.check("chain generating function = R~", {{"word", wtext}, {"x", W.format(ex)}, {"y", W.format(ey)}},
                pj(kl.r_tilde(ex, ey)), pj(r_gf_oracle(G, ex, ey, order)));
    }
  }
}

// Independent realization: the geometric representation in doubles, with
// elements identified by their rounded matrices.
struct FloatRealization {
  explicit FloatRealization(const CoxeterSystem& W) : n(W.rank()), gens(n) {
    for (int s = 0; s < n; ++s) {
      std::vector<double> m(n * n, 0.0);
      for (int i = 0; i < n; ++i) m[i * n + i] = 1.0;
      for (int t = 0; t < n; ++t) {
        const int bond = W.bond(s, t);
        const double B = s == t ? 1.0 : (bond == kInfinity ? -1.0 : -std::cos(M_PI / bond));
        // s(e_t) = e_t - 2 B(s,t) e_s: column t gains -2B in row s.
        m[s * n + t] -= 2.0 * B;
      }
      gens[s] = std::move(m);
    }
  }
  std::vector<double> times(const std::vector<double>& a, Gen s) const {
    std::vector<double> out(n * n, 0.0);
    const auto& g = gens[s];
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (a[i * n + k] != 0.0)
          for (int j = 0; j < n; ++j) out[i * n + j] += a[i * n + k] * g[k * n + j];
    return out;
  }
  std::vector<long long> key(const std::vector<double>& a) const {
    std::vector<long long> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::llround(a[i] * 1e6);
    return out;
  }
  int n;
  std::vector<std::vector<double>> gens;
};

std::set<Element> inversion_set(const CoxeterSystem& W, const Element& x) {
  std::set<Element> out;
  for (const auto& t : W.inversions(x)) out.insert(t.element);
  return out;
}

void suite_group_engine(Context& ctx, SuiteReport& rep) {
  const CoxeterSystem& W = ctx.W;
  const int n = W.rank();
  const int max_len = (n <= 3 ? 8 : n <= 5 ? 6 : 4) + (ctx.opt.slow ? 2 : 0);
  const FloatRealization real(W);

  // Breadth-first search of the Cayley graph on matrices.
  std::map<std::vector<long long>, int> dist;
  std::vector<std::pair<std::vector<double>, int>> frontier;
  std::vector<double> id(n * n, 0.0);
  for (int i = 0; i < n; ++i) id[i * n + i] = 1.0;
  dist[real.key(id)] = 0;
  frontier.emplace_back(id, 0);
  for (int d = 1; d <= max_len; ++d) {
    std::vector<std::pair<std::vector<double>, int>> next;
    for (const auto& [m, _] : frontier)
      for (Gen s = 0; s < n; ++s) {
        auto ms = real.times(m, s);
        if (dist.try_emplace(real.key(ms), d).second) next.emplace_back(std::move(ms), d);
      }
    frontier = std::move(next);
  }

  // Every word of length <= max_len: its canonical form has the BFS length,
  // and two words agree as elements iff their canonical forms agree.
  std::map<std::vector<long long>, Word> canonical_of;
  std::map<Word, std::vector<long long>> key_of;
  std::vector<std::size_t> words(max_len + 1, 0), length_bad(max_len + 1, 0), form_bad(max_len + 1, 0);
  std::vector<Element> sample;
  std::function<void(Word&, const std::vector<double>&)> walk = [&](Word& word, const std::vector<double>& m) {
    const std::size_t L = word.size();
    const Element x = W.reduce(word);
    const auto k = real.key(m);
    ++words[L];
    auto it = dist.find(k);
    if (it == dist.end() || it->second != x.length()) ++length_bad[L];
    auto [ci, fresh] = canonical_of.try_emplace(k, x.word());
    if (!fresh && ci->second != x.word()) ++form_bad[L];
    auto [ki, kfresh] = key_of.try_emplace(x.word(), k);
    if (!kfresh && ki->second != k) ++form_bad[L];
    if (fresh) sample.push_back(x);
    if (static_cast<int>(L) == max_len) return;
    for (Gen s = 0; s < n; ++s) {
      word.push_back(s);
      walk(word, real.times(m, s));
      word.pop_back();
    }
  };
  Word start;
  walk(start, id);
  for (int L = 0; L <= max_len; ++L) {
    rep.check("canonical length = Cayley distance", {{"word_length", L}, {"words", words[L]}}, 0, length_bad[L]);
    rep.check("canonical forms separate elements", {{"word_length", L}, {"words", words[L]}}, 0, form_bad[L]);
  }
  std::size_t inversion_bad = 0;
  for (const auto& x : sample) inversion_bad += static_cast<int>(W.inversions(x).size()) != x.length();
  rep.check("|N(x)| = l(x)", {{"elements", sample.size()}}, 0, inversion_bad);

  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  for (int k = 0; k < 200; ++k) {
    const Element& x = sample[pick(ctx.rng)];
    const Element& y = sample[pick(ctx.rng)];
    // N(xy) = N(x) + x N(y) x^-1 (symmetric difference)
    std::set<Element> expected = inversion_set(W, x);
    for (const auto& t : inversion_set(W, y)) {
      const Element c = W.mul(W.mul(x, t), W.inv(x));
      if (!expected.erase(c)) expected.insert(c);
    }
    json e = json::array(), a = json::array();
    for (const auto& t : expected) e.push_back(W.format(t));
    for (const auto& t : inversion_set(W, W.mul(x, y))) a.push_back(W.format(t));
    rep.check("N(xy) = N(x) + x N(y) x^-1", {{"x", W.format(x)}, {"y", W.format(y)}}, e, a);
  }

  for (int k = 0; k < 200; ++k) {
    const Element& x = sample[pick(ctx.rng)];
    const Element& y = sample[pick(ctx.rng)];
    if (y.length() > 10) continue;
    // Subword property on the canonical word of y.
    bool found = false;
    const Word& yw = y.word();
    for (std::uint32_t mask = 0; mask < (1u << yw.size()) && !found; ++mask) {
      if (std::popcount(mask) != x.length()) continue;
      Word sub;
      for (std::size_t i = 0; i < yw.size(); ++i)
        if (mask >> i & 1u) sub.push_back(yw[i]);
      found = W.reduce(sub) == x;
    }
    rep.check("Bruhat order = subword order", {{"x", W.format(x)}, {"y", W.format(y)}}, found, W.bruhat_leq(x, y));
  }

  const ClassicalKL smallest(W, DescentPolicy::Smallest), largest(W, DescentPolicy::Largest);
  for (int k = 0; k < 200; ++k) {
    const Element& x = sample[pick(ctx.rng)];
    const Element& y = sample[pick(ctx.rng)];
    if (y.length() > 6) continue;
    const json inputs{{"x", W.format(x)}, {"y", W.format(y)}};
    rep.check("R~ independent of descent choice", inputs, pj(smallest.r_tilde(x, y)), pj(largest.r_tilde(x, y)));
    rep.check("P independent of descent choice", inputs, qj(smallest.kl_p(x, y)), qj(largest.kl_p(x, y)));
  }
  SpringerPoset vl(W, BRecursion::Right, DescentPolicy::Largest), vm(W, BRecursion::Mixed, DescentPolicy::Largest);
  TwistedKL tl(ctx.h, DescentPolicy::Largest);
  for (auto [i, j] : ctx.pairs(ctx.cap(2000), ctx.samples(300))) {
    const VElement& w = ctx.elems[i];
    const VElement& v = ctx.elems[j];
    const json b = pj(ctx.V.b_poly(w, v));
    rep.check("b-tilde independent of descent choice", ctx.pair_json(i, j), b, pj(vl.b_poly(w, v)));
    rep.check("mixed b-tilde independent of descent choice", ctx.pair_json(i, j), b, pj(vm.b_poly(w, v)));
    rep.check("R^A independent of descent choice", ctx.pair_json(i, j), b, pj(tl.r_a(phi(ctx.h, w), phi(ctx.h, v))));
  }
}

using SuiteFn = void (*)(Context&, SuiteReport&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> table{
      {"iso", suite_iso},
      {"lengths", suite_lengths},
      {"b-dual-route", suite_b_dual_route},
      {"involution", suite_involution},
      {"finite-classical", suite_finite_classical},
      {"hat-invariance", suite_hat_invariance},
      {"purity-mobius", suite_purity_mobius},
      {"graph-deodhar", suite_graph_deodhar},
      {"remark", suite_remark},
      {"enumeration-invariance", suite_enumeration_invariance},
      {"classical-oracle", suite_classical_oracle},
      {"group-engine", suite_group_engine},
  };
  return table;
}

}  // namespace

SuiteReport run_suite(const std::string& suite, const CoxeterSystem& W, const HatConfig& hat, const VerifyOptions& options) {
  const auto& table = registry();
  auto it = table.find(suite);
  if (it == table.end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  const json config{{"system", system_to_json(W)}, {"hat", hat_config_to_json(hat)}, {"seed", options.seed},
                    {"slow", options.slow}, {"samples", options.samples}, {"max_length", options.max_length}};
  SuiteReport report(suite, digest(config.dump()));
  const auto start = std::chrono::steady_clock::now();
  Context ctx(W, hat, options);
  it->second(ctx, report);
  report.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return report;
}

}  // namespace coxkl
