#pragma once

#include <algorithm>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxkl/coxeter.hpp"
#include "coxkl/finite_group.hpp"
#include "coxkl/laurent.hpp"

namespace coxkl {

enum class PolyKind { RTilde, P, Q, RA, PA, B, C };
std::string to_string(PolyKind kind);

/// Append-only memo of polynomials keyed by ordered pairs. Writers of the
/// same key must agree; a disagreeing write is a logic error.
template <class Key, class Hash>
class PolyTable {
 public:
  explicit PolyTable(PolyKind kind) : kind_(kind) {}
  PolyTable(const PolyTable&) = delete;
  PolyTable& operator=(const PolyTable&) = delete;

  PolyKind kind() const { return kind_; }

  std::optional<LaurentPoly> find(const Key& x, const Key& y) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find({x, y});
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  /// Memo writes are logically const: they never change an observable value.
  const LaurentPoly& insert(const Key& x, const Key& y, LaurentPoly p) const {
    std::unique_lock lock(mutex_);
    auto [it, fresh] = map_.try_emplace({x, y}, std::move(p));
    if (!fresh && it->second != p) throw std::logic_error("memo table received two values for one key");
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

  /// Snapshot of all entries sorted by key.
  std::vector<std::pair<std::pair<Key, Key>, LaurentPoly>> entries() const {
    std::shared_lock lock(mutex_);
    std::vector<std::pair<std::pair<Key, Key>, LaurentPoly>> out(map_.begin(), map_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<Key, Key>& p) const noexcept {
      return hash_combine(Hash{}(p.first), Hash{}(p.second));
    }
  };
  PolyKind kind_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::pair<Key, Key>, LaurentPoly, PairHash> map_;
};

using ElementTable = PolyTable<Element, ElementHash>;

/// Which descent a recursion steps along when several are available.
enum class DescentPolicy { Smallest, Largest };

/// Result of the generic KL solve on a finite slice of n elements, stored
/// row-major: entry (i, j) concerns the pair i <= j.
struct KLSolution {
  std::size_t n = 0;
  std::vector<LaurentPoly> p;
  std::vector<QPoly> P;
  const LaurentPoly& p_at(std::size_t i, std::size_t j) const { return p[i * n + j]; }
  const QPoly& P_at(std::size_t i, std::size_t j) const { return P[i * n + j]; }
};

/// Solve p(w,w) = 1, p(v,w) in u^-1 Z[u^-1], p(v,w) = sum_z R(v,z) bar(p(z,w)).
/// `r` is n x n row-major with R(v,z) != 0 exactly when v <= z, and R(v,v) = 1.
/// Throws KLConsistencyError naming the first pair whose right-hand side is not
/// antisymmetric under bar.
KLSolution generic_kl_from_r(const std::vector<int>& lengths, const std::vector<LaurentPoly>& r);

/// The family Q with sum_z (-1)^(l(z)-l(x)) P(x,z) Q(z,y) = delta(x,y).
std::vector<QPoly> kl_inverse(const std::vector<int>& lengths, const std::vector<QPoly>& P);

/// Classical R-tilde, P and Q for an arbitrary Coxeter system, memoized by pair.
class ClassicalKL {
 public:
  explicit ClassicalKL(const CoxeterSystem& system, DescentPolicy policy = DescentPolicy::Smallest);

  const CoxeterSystem& system() const { return *system_; }
  DescentPolicy policy() const { return policy_; }

  LaurentPoly r_tilde(const Element& x, const Element& y) const;
  QPoly r_q(const Element& x, const Element& y) const;
  QPoly kl_p(const Element& x, const Element& y) const;
  QPoly kl_q(const Element& x, const Element& y) const;

  /// Bruhat interval [x, y], by increasing length then ShortLex.
  std::vector<Element> interval(const Element& x, const Element& y) const;

  const ElementTable& r_table() const { return r_; }
  const ElementTable& p_table() const { return p_; }
  const ElementTable& q_table() const { return q_; }

 private:
  Gen pick_descent(const Element& y) const;
  void solve_interval(const Element& x, const Element& y) const;

  const CoxeterSystem* system_;
  DescentPolicy policy_;
  mutable ElementTable r_{PolyKind::RTilde};
  mutable ElementTable p_{PolyKind::P};
  mutable ElementTable q_{PolyKind::Q};
};

using ReflectionOrder = std::vector<Reflection>;

/// t_i = s_1 ... s_(i-1) s_i s_(i-1) ... s_1 for a reduced word of w0.
/// Throws std::invalid_argument if the word is not a reduced word of w0.
ReflectionOrder reflection_order_from_w0(const CoxeterSystem& system, const Word& word);

/// Checks that every rank-2 root subsystem is listed in one of its two
/// angular orders. Needs the integer root realization.
bool is_reflection_order(const CoxeterSystem& system, const ReflectionOrder& order);

/// Sum of abar^n over chains x < t_1 x < t_2 t_1 x < ... = y with t_1 < t_2 < ...
/// strictly increasing in the given order.
LaurentPoly r_gf_oracle(const FiniteCoxeterGroup& group, const Element& x, const Element& y,
                        const ReflectionOrder& order);

/// All reduced words of x, lexicographically sorted.
std::vector<Word> reduced_words(const CoxeterSystem& system, const Element& x);

}  // namespace coxkl
