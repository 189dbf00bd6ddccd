#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "coxkl/coxeter.hpp"
#include "coxkl/kl.hpp"
#include "coxkl/laurent.hpp"

namespace coxkl {

/// Springer triple [I, a, b] with I a subset of S, a in W^I and b in W.
class VElement {
 public:
  /// Throws std::invalid_argument unless a is a minimal left coset representative for W_I.
  VElement(GenSet I, Element a, Element b);

  GenSet I() const { return I_; }
  const Element& a() const { return a_; }
  const Element& b() const { return b_; }
  const CoxeterSystem& system() const { return a_.system(); }

  bool operator==(const VElement& o) const { return I_ == o.I_ && a_ == o.a_ && b_ == o.b_; }
  std::strong_ordering operator<=>(const VElement& o) const;

 private:
  GenSet I_;
  Element a_;
  Element b_;
};

struct VElementHash {
  std::size_t operator()(const VElement& v) const noexcept {
    return hash_combine(hash_combine(std::hash<GenSet>{}(v.I()), ElementHash{}(v.a())), ElementHash{}(v.b()));
  }
};

using VTable = PolyTable<VElement, VElementHash>;

/// (s,1) for Side::Left, (1,s) for Side::Right.
struct PairGenerator {
  Side side;
  Gen s;
};

/// d([I,a,b]) = -l(a) + l(b) + |I|.
int v_dim(const VElement& v);
VElement v_act(PairGenerator g, const VElement& v);
/// (x,1).v for an arbitrary x in W.
VElement v_act_left(const Element& x, const VElement& v);
/// (1,y).v for an arbitrary y in W.
VElement v_act_right(const Element& y, const VElement& v);

/// Finite R-linear combination of basis vectors m_v.
using ModuleElement = std::map<VElement, LaurentPoly>;
ModuleElement hecke_act(PairGenerator g, const ModuleElement& m);
ModuleElement hecke_act_inverse(PairGenerator g, const ModuleElement& m);

/// Which step the b-tilde recursion takes: always on b (right), or on a
/// whenever a has a left descent (mixed).
enum class BRecursion { Right, Mixed };

/// Springer's poset V for one Coxeter system, with memoized b-tilde and c tables.
class SpringerPoset {
 public:
  explicit SpringerPoset(const CoxeterSystem& system, BRecursion recursion = BRecursion::Right,
                         DescentPolicy policy = DescentPolicy::Smallest);

  const CoxeterSystem& system() const { return *system_; }
  const ClassicalKL& classical() const { return classical_; }

  /// All of V, sorted; W must be finite.
  const std::vector<VElement>& elements() const;

  LaurentPoly b_poly(const VElement& w, const VElement& v) const;
  bool leq(const VElement& w, const VElement& v) const { return !b_poly(w, v).is_zero(); }
  bool leq1(const VElement& w, const VElement& v) const;
  bool leq2(const VElement& w, const VElement& v) const;

  /// {z : w <= z <= v}, sorted by d then element order.
  std::vector<VElement> interval(const VElement& w, const VElement& v) const;

  QPoly c_poly(const VElement& w, const VElement& v) const;
  QPoly c_inv_poly(const VElement& w, const VElement& v) const;

  /// Edge w -> v iff d/du b(w,v) at u = 1 is nonzero.
  bool graph_edge(const VElement& w, const VElement& v) const;
  /// Reflection or rank-one augmentation characterization of the same edges.
  bool graph_edge_combinatorial(const VElement& w, const VElement& v) const;
  int deodhar_count(const VElement& w, const VElement& z, const VElement& v) const;

  long mobius(const VElement& w, const VElement& v) const;
  /// Shortest and longest maximal chain (element counts) of [w, v].
  std::pair<int, int> chain_lengths(const VElement& w, const VElement& v) const;
  /// Cover relations inside a sorted set, as index pairs (lower, upper).
  std::vector<std::pair<std::size_t, std::size_t>> hasse(const std::vector<VElement>& elems) const;

  /// le[i][j] iff elems[i] <= elems[j].
  std::vector<std::vector<bool>> order_matrix(const std::vector<VElement>& elems) const;

  const VTable& b_table() const { return b_; }

 private:
  const std::vector<Element>& elements_up_to(int len) const;
  void solve_c(const VElement& w, const VElement& v) const;

  const CoxeterSystem* system_;
  BRecursion recursion_;
  DescentPolicy policy_;
  ClassicalKL classical_;
  mutable VTable b_{PolyKind::B};
  mutable VTable c_{PolyKind::C};
  mutable VTable c_inv_{PolyKind::C};
  mutable std::optional<std::vector<VElement>> all_;
  mutable std::map<int, std::vector<Element>> bounded_;
  mutable std::mutex mutex_;
};

std::string format(const VElement& v);

}  // namespace coxkl
