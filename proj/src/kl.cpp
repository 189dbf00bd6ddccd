#include "coxkl/kl.hpp"

#include <map>
#include <set>
#include <unordered_set>

#include "coxkl/errors.hpp"

namespace coxkl {

std::string to_string(PolyKind kind) {
  switch (kind) {
    case PolyKind::RTilde: return "rtilde";
    case PolyKind::P: return "P";
    case PolyKind::Q: return "Q";
    case PolyKind::RA: return "RA";
    case PolyKind::PA: return "PA";
    case PolyKind::B: return "btilde";
    case PolyKind::C: return "c";
  }
  return "?";
}

KLSolution generic_kl_from_r(const std::vector<int>& lengths, const std::vector<LaurentPoly>& r) {
  const std::size_t n = lengths.size();
  if (r.size() != n * n) throw std::invalid_argument("R table does not match the slice size");
  for (std::size_t i = 0; i < n; ++i)
    if (r[i * n + i] != LaurentPoly::one())
      throw KLConsistencyError(i, i, "R table is not 1 on the diagonal at element " + std::to_string(i));

  KLSolution sol;
  sol.n = n;
  sol.p.assign(n * n, LaurentPoly());
  sol.P.assign(n * n, QPoly());

  std::vector<std::size_t> by_length(n);
  for (std::size_t i = 0; i < n; ++i) by_length[i] = i;
  std::stable_sort(by_length.begin(), by_length.end(), [&](std::size_t a, std::size_t b) { return lengths[a] > lengths[b]; });

  for (std::size_t w = 0; w < n; ++w) {
    sol.p[w * n + w] = LaurentPoly::one();
    sol.P[w * n + w] = QPoly::one();
    // Longest first, so p(z,w) is known for every z strictly above v.
    for (std::size_t v : by_length) {
      if (v == w || r[v * n + w].is_zero()) continue;
      LaurentPoly f;
      for (std::size_t z = 0; z < n; ++z) {
        if (z == v) continue;
        const LaurentPoly& rvz = r[v * n + z];
        const LaurentPoly& pzw = sol.p[z * n + w];
        if (rvz.is_zero() || pzw.is_zero()) continue;
        f += rvz * pzw.bar();
      }
      if (f.coefficient(0) != 0 || f.bar() != -f)
        throw KLConsistencyError(v, w, "R table is inconsistent at pair (" + std::to_string(v) + ", " +
                                           std::to_string(w) + "): the KL right-hand side is not bar-antisymmetric");
      sol.p[v * n + w] = f.negative_part();
      sol.P[v * n + w] = p_normalize(sol.p[v * n + w], lengths[v], lengths[w]);
    }
  }
  return sol;
}

std::vector<QPoly> kl_inverse(const std::vector<int>& lengths, const std::vector<QPoly>& P) {
  const std::size_t n = lengths.size();
  if (P.size() != n * n) throw std::invalid_argument("P table does not match the slice size");
  std::vector<std::size_t> by_length(n);
  for (std::size_t i = 0; i < n; ++i) by_length[i] = i;
  std::stable_sort(by_length.begin(), by_length.end(), [&](std::size_t a, std::size_t b) { return lengths[a] > lengths[b]; });

  std::vector<QPoly> Q(n * n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x : by_length) {
      if (x == y) {
        Q[y * n + y] = QPoly::one();
        continue;
      }
      if (P[x * n + y].is_zero()) continue;
      QPoly acc;
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || P[x * n + z].is_zero() || Q[z * n + y].is_zero()) continue;
        QPoly term = P[x * n + z] * Q[z * n + y];
        if ((lengths[z] - lengths[x]) % 2 != 0) acc -= term;
        else acc += term;
      }
      Q[x * n + y] = -acc;
    }
  }
  return Q;
}

namespace {

QPoly from_u_squared(const LaurentPoly& p) {
  std::vector<Int> coeffs;
  for (const auto& [e, c] : p.terms()) {
    if (coeffs.size() <= static_cast<std::size_t>(e / 2)) coeffs.resize(e / 2 + 1);
    coeffs[e / 2] = c;
  }
  return QPoly(std::move(coeffs));
}

}  // namespace

ClassicalKL::ClassicalKL(const CoxeterSystem& system, DescentPolicy policy) : system_(&system), policy_(policy) {}

Gen ClassicalKL::pick_descent(const Element& y) const {
  if (policy_ == DescentPolicy::Smallest) return y.word().front();
  return system_->descents(y, Side::Left).members().back();
}

LaurentPoly ClassicalKL::r_tilde(const Element& x, const Element& y) const {
  if (&x.system() != system_ || &y.system() != system_) throw std::invalid_argument("element belongs to a different Coxeter system");
  if (x.length() > y.length()) return {};
  if (x.length() == y.length()) return x == y ? LaurentPoly::one() : LaurentPoly();
  if (auto hit = r_.find(x, y)) return *hit;
  const Gen s = pick_descent(y);
  const Element sy = system_->left_mul(s, y);
  const Element sx = system_->left_mul(s, x);
  LaurentPoly out = r_tilde(sx, sy);
  if (sx.length() > x.length()) out += LaurentPoly::abar() * r_tilde(x, sy);
  return r_.insert(x, y, std::move(out));
}

QPoly ClassicalKL::r_q(const Element& x, const Element& y) const {
  return r_q_from_tilde(r_tilde(x, y), x.length(), y.length());
}

std::vector<Element> ClassicalKL::interval(const Element& x, const Element& y) const {
  if (!system_->bruhat_leq(x, y)) return {};
  const Word& w = y.word();
  std::unordered_set<Word, WordHash> lower{Word{}};
  // Suffixes of a canonical word are canonical: [1, s y'] = [1, y'] u s[1, y'].
  for (std::size_t i = w.size(); i-- > 0;) {
    std::vector<Word> added;
    for (const Word& z : lower) {
      Word sz{w[i]};
      sz.insert(sz.end(), z.begin(), z.end());
      added.push_back(system_->reduce(sz).word());
    }
    lower.insert(added.begin(), added.end());
  }
  std::vector<Element> out;
  for (const Word& z : lower) {
    Element e = system_->reduce(z);
    if (e.length() >= x.length() && system_->bruhat_leq(x, e)) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ClassicalKL::solve_interval(const Element& x, const Element& y) const {
  const auto elems = interval(x, y);
  const std::size_t n = elems.size();
  std::vector<int> lengths(n);
  for (std::size_t i = 0; i < n; ++i) lengths[i] = elems[i].length();
  std::vector<LaurentPoly> r(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (lengths[i] <= lengths[j]) r[i * n + j] = r_tilde(elems[i], elems[j]);
  const KLSolution sol = generic_kl_from_r(lengths, r);
  const auto Q = kl_inverse(lengths, sol.P);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (r[i * n + j].is_zero()) continue;
      p_.insert(elems[i], elems[j], sol.P[i * n + j].in_u());
      q_.insert(elems[i], elems[j], Q[i * n + j].in_u());
    }
}

QPoly ClassicalKL::kl_p(const Element& x, const Element& y) const {
  if (!system_->bruhat_leq(x, y)) return {};
  if (auto hit = p_.find(x, y)) return from_u_squared(*hit);
  solve_interval(x, y);
  return from_u_squared(*p_.find(x, y));
}

QPoly ClassicalKL::kl_q(const Element& x, const Element& y) const {
  if (!system_->bruhat_leq(x, y)) return {};
  if (auto hit = q_.find(x, y)) return from_u_squared(*hit);
  solve_interval(x, y);
  return from_u_squared(*q_.find(x, y));
}

ReflectionOrder reflection_order_from_w0(const CoxeterSystem& system, const Word& word) {
  const Element w = system.reduce(word);
  if (w.length() != static_cast<int>(word.size())) throw std::invalid_argument("word is not reduced");
  if (w != system.longest_element()) throw std::invalid_argument("word is not a reduced word of the longest element");
  ReflectionOrder out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    Word t(word.begin(), word.begin() + i + 1);
    t.insert(t.end(), word.rend() - i, word.rend());
    out.push_back(system.reflection(system.reduce(t)));
  }
  return out;
}

bool is_reflection_order(const CoxeterSystem& system, const ReflectionOrder& order) {
  if (!system.uses_integer_cartan()) throw std::domain_error("reflection-order check needs the integer root realization");
  const std::size_t n = order.size();
  std::set<Word> seen;
  for (const auto& t : order)
    if (!system.is_reflection(t.element) || !seen.insert(t.element.word()).second) return false;
  if (system.is_finite() && static_cast<int>(n) != system.longest_element().length()) return false;

  const int rank = system.rank();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) {
      const auto& a = order[i].root;
      const auto& g = order[k].root;
      int p = -1, q = -1;
      Int det = 0;
      for (int r = 0; r < rank && p < 0; ++r)
        for (int c = r + 1; c < rank; ++c) {
          det = Int(a[r]) * g[c] - Int(a[c]) * g[r];
          if (det != 0) {
            p = r;
            q = c;
            break;
          }
        }
      if (p < 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const auto& b = order[j].root;
        const Int A = Int(b[p]) * g[q] - Int(b[q]) * g[p];
        const Int B = Int(a[p]) * b[q] - Int(a[q]) * b[p];
        bool in_span = true;
        for (int r = 0; r < rank && in_span; ++r) in_span = det * b[r] == A * a[r] + B * g[r];
        if (!in_span) continue;
        const bool positive = (A * det > 0) && (B * det > 0);
        if (positive && !(i < j && j < k)) return false;
      }
    }
  return true;
}

LaurentPoly r_gf_oracle(const FiniteCoxeterGroup& group, const Element& x, const Element& y,
                        const ReflectionOrder& order) {
  using Index = FiniteCoxeterGroup::Index;
  const Index xi = group.index(x), yi = group.index(y);
  if (!group.leq(xi, yi)) return {};
  std::vector<Index> members;
  std::unordered_map<Index, std::size_t> slot;
  for (Index z = 0; z < group.size(); ++z)
    if (group.leq(xi, z) && group.leq(z, yi)) {
      slot.emplace(z, members.size());
      members.push_back(z);
    }
  std::vector<Index> refl;
  for (const auto& t : order) refl.push_back(group.index(t.element));

  // f[z] = chains from z to y using reflections at or after the current
  // position, as coefficients by chain length; sweep the order backwards.
  using Counts = std::vector<Int>;
  std::vector<Counts> f(members.size());
  f[slot.at(yi)] = Counts{1};
  for (std::size_t k = refl.size(); k-- > 0;) {
    std::vector<Counts> next = f;
    for (std::size_t m = 0; m < members.size(); ++m) {
      const Index z = members[m];
      const Index tz = group.mul(refl[k], z);
      if (group.length(tz) <= group.length(z)) continue;
      auto it = slot.find(tz);
      if (it == slot.end() || f[it->second].empty()) continue;
      const Counts& tail = f[it->second];
      Counts& dst = next[m];
      if (dst.size() < tail.size() + 1) dst.resize(tail.size() + 1);
      for (std::size_t c = 0; c < tail.size(); ++c) dst[c + 1] += tail[c];
    }
    f = std::move(next);
  }
  std::map<int, Int> coeffs;
  const Counts& res = f[slot.at(xi)];
  for (std::size_t c = 0; c < res.size(); ++c)
    if (res[c] != 0) coeffs[static_cast<int>(c)] = res[c];
  return LaurentPoly::from_abar(coeffs);
}

std::vector<Word> reduced_words(const CoxeterSystem& system, const Element& x) {
  std::map<Word, std::vector<Word>> memo;
  std::function<const std::vector<Word>&(const Element&)> go = [&](const Element& e) -> const std::vector<Word>& {
    if (auto it = memo.find(e.word()); it != memo.end()) return it->second;
    std::vector<Word> out;
    if (e.is_identity()) {
      out.push_back({});
    } else {
      for (Gen s : system.descents(e, Side::Right).members())
        for (Word w : go(system.right_mul(e, s))) {
          w.push_back(s);
          out.push_back(std::move(w));
        }
    }
    std::sort(out.begin(), out.end());
    return memo.emplace(e.word(), std::move(out)).first->second;
  };
  return go(x);
}

}  // namespace coxkl
