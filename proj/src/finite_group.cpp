#include "coxkl/finite_group.hpp"

#include <bit>
#include <stdexcept>

#include "coxkl/errors.hpp"

namespace coxkl {

FiniteCoxeterGroup::FiniteCoxeterGroup(const CoxeterSystem& system)
    : system_(&system), rank_(system.rank()) {
  if (!system.is_finite()) throw InfiniteGroupError("group is infinite; no dense index");
  elements_ = system.enumerate(system.all(), CosetKind::Parabolic);
  const std::size_t n = elements_.size();
  lookup_.reserve(n);
  for (Index i = 0; i < n; ++i) lookup_.emplace(elements_[i].word(), i);

  right_.resize(n * rank_);
  for (Index i = 0; i < n; ++i)
    for (int s = 0; s < rank_; ++s) right_[i * rank_ + s] = index(system.right_mul(elements_[i], static_cast<Gen>(s)));

  // Walk the reversed word through the right table to invert.
  inverse_.resize(n);
  for (Index i = 0; i < n; ++i) {
    Index j = 0;
    const Word& w = elements_[i].word();
    for (auto it = w.rbegin(); it != w.rend(); ++it) j = rmul(j, *it);
    inverse_[i] = j;
  }
  left_.resize(n * rank_);
  for (Index i = 0; i < n; ++i)
    for (int s = 0; s < rank_; ++s) left_[i * rank_ + s] = inverse_[rmul(inverse_[i], static_cast<Gen>(s))];

  reflection_flag_.assign(n, false);
  for (Index x = 0; x < n; ++x)
    for (int s = 0; s < rank_; ++s) reflection_flag_[mul(rmul(x, static_cast<Gen>(s)), inverse_[x])] = true;
  for (Index i = 0; i < n; ++i)
    if (reflection_flag_[i]) reflections_.push_back(i);

  lower_.resize(n);
}

FiniteCoxeterGroup::Index FiniteCoxeterGroup::index(const Element& x) const {
  auto it = lookup_.find(x.word());
  if (it == lookup_.end()) throw std::invalid_argument("element not in the indexed group");
  return it->second;
}

FiniteCoxeterGroup::Index FiniteCoxeterGroup::mul(Index i, Index j) const {
  for (Gen s : elements_[j].word()) i = rmul(i, s);
  return i;
}

// [1,y] = [1,sy] u s[1,sy] for s the first letter of y.
const std::vector<std::uint64_t>& FiniteCoxeterGroup::lower_set(Index y) const {
  std::lock_guard lock(bruhat_mutex_);
  std::vector<Index> pending;
  for (Index c = y; !lower_[c]; ) {
    pending.push_back(c);
    if (c == 0) break;
    c = lmul(elements_[c].word().front(), c);
  }
  const std::size_t words = (size() + 63) / 64;
  for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
    const Index c = *it;
    auto bits = std::make_unique<std::vector<std::uint64_t>>(words, 0);
    if (c == 0) {
      (*bits)[0] = 1;
    } else {
      const Gen s = elements_[c].word().front();
      const auto& below = *lower_[lmul(s, c)];
      *bits = below;
      for (std::size_t w = 0; w < words; ++w)
        for (std::uint64_t b = below[w]; b != 0; b &= b - 1) {
          const Index z = lmul(s, static_cast<Index>(w * 64 + std::countr_zero(b)));
          (*bits)[z / 64] |= std::uint64_t{1} << (z % 64);
        }
    }
    lower_[c] = std::move(bits);
  }
  return *lower_[y];
}

bool FiniteCoxeterGroup::leq(Index x, Index y) const {
  if (x == y) return true;
  if (length(x) >= length(y)) return false;
  const auto& bits = lower_set(y);
  return (bits[x / 64] >> (x % 64)) & 1u;
}

}  // namespace coxkl
