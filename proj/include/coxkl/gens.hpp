#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace coxkl {

/// Index of a simple generator in the fixed enumeration of a system.
using Gen = std::uint8_t;
using Word = std::vector<Gen>;

inline constexpr int kMaxGenerators = 64;

/// A subset of the generators, stored as a bitmask over the enumeration.
class GenSet {
 public:
  constexpr GenSet() = default;
  constexpr explicit GenSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr GenSet first(int n) {
    return GenSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr GenSet single(Gen g) { return GenSet(std::uint64_t{1} << g); }

  constexpr bool contains(Gen g) const { return (bits_ >> g) & 1u; }
  constexpr void insert(Gen g) { bits_ |= std::uint64_t{1} << g; }
  constexpr void erase(Gen g) { bits_ &= ~(std::uint64_t{1} << g); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_subset_of(GenSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr GenSet operator|(GenSet o) const { return GenSet(bits_ | o.bits_); }
  constexpr GenSet operator&(GenSet o) const { return GenSet(bits_ & o.bits_); }
  constexpr GenSet operator-(GenSet o) const { return GenSet(bits_ & ~o.bits_); }
  constexpr bool operator==(const GenSet&) const = default;
  constexpr auto operator<=>(const GenSet&) const = default;

  /// Members in increasing enumeration order.
  std::vector<Gen> members() const {
    std::vector<Gen> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<Gen>(std::countr_zero(b)));
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// FNV-1a over a generator word; used for all word-keyed hash tables.
struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (Gen g : w) {
      h ^= g;
      h *= 1099511628211ull;
    }
    h ^= w.size();
    return static_cast<std::size_t>(h);
  }
};

inline std::size_t hash_combine(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

}  // namespace coxkl

template <>
struct std::hash<coxkl::GenSet> {
  std::size_t operator()(coxkl::GenSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
