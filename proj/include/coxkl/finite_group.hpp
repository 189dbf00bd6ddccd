#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "coxkl/coxeter.hpp"

namespace coxkl {

/// Dense index of a finite Coxeter group: elements in ShortLex order with
/// generator multiplication tables and a lazily built Bruhat bit matrix.
class FiniteCoxeterGroup {
 public:
  using Index = std::uint32_t;

  /// Throws InfiniteGroupError if W is infinite.
  explicit FiniteCoxeterGroup(const CoxeterSystem& system);

  const CoxeterSystem& system() const { return *system_; }
  std::size_t size() const { return elements_.size(); }
  const Element& element(Index i) const { return elements_[i]; }
  const std::vector<Element>& elements() const { return elements_; }
  Index index(const Element& x) const;
  int length(Index i) const { return elements_[i].length(); }

  Index identity() const { return 0; }
  Index longest() const { return static_cast<Index>(size() - 1); }
  Index lmul(Gen s, Index i) const { return left_[i * rank_ + s]; }
  Index rmul(Index i, Gen s) const { return right_[i * rank_ + s]; }
  Index mul(Index i, Index j) const;
  Index inv(Index i) const { return inverse_[i]; }

  /// Reflections of W, in ShortLex order.
  const std::vector<Index>& reflections() const { return reflections_; }
  bool is_reflection(Index i) const { return reflection_flag_[i]; }

  bool leq(Index x, Index y) const;

 private:
  const std::vector<std::uint64_t>& lower_set(Index y) const;

  const CoxeterSystem* system_;
  int rank_;
  std::vector<Element> elements_;
  std::unordered_map<Word, Index, WordHash> lookup_;
  std::vector<Index> left_, right_, inverse_;
  std::vector<Index> reflections_;
  std::vector<bool> reflection_flag_;

  mutable std::mutex bruhat_mutex_;
  mutable std::vector<std::unique_ptr<std::vector<std::uint64_t>>> lower_;
};

}  // namespace coxkl
