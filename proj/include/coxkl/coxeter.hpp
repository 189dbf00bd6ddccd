#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coxkl/gens.hpp"
#include "coxkl/scalar_ring.hpp"

namespace coxkl {

/// Bond-order encoding for m(r,s) = infinity.
inline constexpr int kInfinity = 0;

class CoxeterSystem;

/// A group element, held as its canonical reduced word: the ShortLex-least
/// reduced word under the system's generator enumeration. Two elements are
/// equal iff their canonical words are equal. The owning system must outlive
/// every element it produced.
class Element {
 public:
  const CoxeterSystem& system() const { return *system_; }
  const Word& word() const { return word_; }
  int length() const { return static_cast<int>(word_.size()); }
  bool is_identity() const { return word_.empty(); }

  bool operator==(const Element& o) const { return system_ == o.system_ && word_ == o.word_; }
  /// ShortLex order: length first, then lexicographic on canonical words.
  std::strong_ordering operator<=>(const Element& o) const;

 private:
  friend class CoxeterSystem;
  Element(const CoxeterSystem* system, Word word) : system_(system), word_(std::move(word)) {}

  const CoxeterSystem* system_;
  Word word_;
};

struct ElementHash {
  std::size_t operator()(const Element& x) const noexcept { return WordHash{}(x.word()); }
};

struct ElementPairHash {
  std::size_t operator()(const std::pair<Element, Element>& p) const noexcept {
    return hash_combine(WordHash{}(p.first.word()), WordHash{}(p.second.word()));
  }
};

/// A reflection together with its positive root. Root coordinates are given in
/// the simple-root basis of the realization the system computes with (the
/// geometric representation, or a positive rescaling of it on the integer
/// Cartan path); they are flattened as rank() blocks of ring().degree() entries.
struct Reflection {
  Element element;
  std::vector<std::int64_t> root;

  bool operator==(const Reflection& o) const { return element == o.element; }
  auto operator<=>(const Reflection& o) const { return element <=> o.element; }
};

enum class Side { Left, Right };

/// Which set `enumerate` walks: the standard parabolic W_I or the minimal
/// left coset representatives W^I.
enum class CosetKind { Parabolic, MinimalLeft };

/// A Coxeter system given by its Coxeter matrix. Immutable after construction
/// and safe to share read-only across threads.
class CoxeterSystem {
 public:
  /// `matrix[r][s]` is m(r,s); use kInfinity for infinity.
  CoxeterSystem(std::vector<std::string> generators, std::vector<std::vector<int>> matrix);

  CoxeterSystem(const CoxeterSystem&) = delete;
  CoxeterSystem& operator=(const CoxeterSystem&) = delete;

  int rank() const { return rank_; }
  GenSet all() const { return GenSet::first(rank_); }
  const std::vector<std::string>& generator_names() const { return names_; }
  const std::string& name(Gen s) const { return names_.at(s); }
  Gen generator_index(std::string_view name) const;
  std::optional<Gen> find_generator(std::string_view name) const;
  int bond(Gen r, Gen s) const { return matrix_[r][s]; }
  const std::vector<std::vector<int>>& matrix() const { return matrix_; }

  const ScalarRing& ring() const { return ring_; }
  bool uses_integer_cartan() const { return integer_cartan_; }
  /// Coefficient A(s,t) in s(e_t) = e_t - A(s,t) e_s.
  std::span<const std::int64_t> cartan(Gen s, Gen t) const;

  Element identity() const { return Element(this, {}); }
  Element generator(Gen s) const;
  /// Canonical element equal to the product of the letters.
  Element reduce(std::span<const Gen> word) const;
  Element reduce_names(const std::vector<std::string>& names) const;

  Element mul(const Element& x, const Element& y) const;
  Element inv(const Element& x) const;
  Element left_mul(Gen s, const Element& x) const;
  Element right_mul(const Element& x, Gen s) const;

  bool is_descent(const Element& x, Gen s, Side side) const;
  GenSet descents(const Element& x, Side side) const;
  GenSet support(const Element& x) const;

  /// N(x) = {t : l(tx) < l(x)}, sorted by element.
  std::vector<Reflection> inversions(const Element& x) const;
  /// Positive roots of N(x), in the order of the canonical word's prefixes.
  std::vector<std::vector<std::int64_t>> inversion_roots(const Element& x) const;
  GenSet root_support(std::span<const std::int64_t> root) const;
  bool is_reflection(const Element& x) const;
  Reflection reflection(const Element& t) const;
  GenSet reflection_support(const Reflection& t) const { return root_support(t.root); }

  bool bruhat_leq(const Element& x, const Element& y) const;

  /// x = u * v with u in W^I, v in W_I, l(x) = l(u) + l(v).
  std::pair<Element, Element> coset_decompose(const Element& x, GenSet I) const;
  /// x = v * u with v in W_I, u in the minimal right coset representatives.
  std::pair<Element, Element> left_coset_decompose(const Element& x, GenSet I) const;
  bool in_parabolic(const Element& x, GenSet I) const { return support(x).is_subset_of(I); }
  bool in_quotient(const Element& x, GenSet I) const { return (descents(x, Side::Right) & I).empty(); }

  /// Type of the finite parabolic W_I ("A2", "B3xA1", "" for I empty), or
  /// nullopt if W_I is infinite.
  std::optional<std::string> finite_type(GenSet I) const;
  bool is_finite(GenSet I) const { return finite_type(I).has_value(); }
  bool is_finite() const { return is_finite(all()); }
  /// Whether the index [W : W_I] is finite.
  bool is_quotient_finite(GenSet I) const;

  /// Longest element of the finite parabolic W_I.
  Element longest_element(GenSet I) const;
  Element longest_element() const { return longest_element(all()); }

  /// Elements of W_I or W^I by increasing length, ShortLex within a length.
  /// Without `max_len` the set must be finite.
  std::vector<Element> enumerate(GenSet I, CosetKind kind, std::optional<int> max_len = std::nullopt) const;

  /// Comma-separated generator names, "1" for the identity.
  std::string format(const Element& x) const;
  /// Concatenated generator names, "1" for the identity.
  std::string format_compact(const Element& x) const;
  std::string format_set(GenSet I) const;

 private:
  using Matrix = std::vector<std::int64_t>;  // column-major, rank x rank blocks of degree()

  void check_same(const Element& x, const Element& y) const;
  void check_element(const Element& x) const;
  Matrix identity_matrix() const;
  void apply_right(Matrix& m, Gen s) const;
  void apply_left(std::span<std::int64_t> v, Gen s) const;
  int root_sign(std::span<const std::int64_t> root) const;
  std::span<std::int64_t> column(Matrix& m, Gen s) const;
  std::span<const std::int64_t> column(const Matrix& m, Gen s) const;
  Matrix matrix_of(const Element& x) const;
  Matrix matrix_of_inverse(const Element& x) const;
  std::vector<std::vector<Gen>> components(GenSet I) const;

  int rank_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> matrix_;
  ScalarRing ring_;
  bool integer_cartan_ = false;
  std::vector<std::int64_t> cartan_;  // rank x rank blocks of degree()
  std::vector<std::vector<Gen>> neighbours_;
};

}  // namespace coxkl
