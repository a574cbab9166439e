#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace hyperalpha {

/// Fixed-width set of vertex ids in [0, 128). Two 64-bit words, laid out so
/// that an array of VertexSet can be loaded two-at-a-time into a 256-bit
/// register by the SIMD kernels.
struct alignas(16) VertexSet {
  static constexpr unsigned kCapacity = 128;

  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  constexpr VertexSet() = default;
  constexpr VertexSet(std::uint64_t low, std::uint64_t high) : lo(low), hi(high) {}
  static constexpr VertexSet of(std::initializer_list<unsigned> vs) {
    VertexSet s;
    for (unsigned v : vs) s.insert(v);
    return s;
  }

  /// The set {0, ..., n-1}.
  static constexpr VertexSet prefix(unsigned n) {
    if (n == 0) return {};
    if (n < 64) return {(std::uint64_t{1} << n) - 1, 0};
    if (n == 64) return {~std::uint64_t{0}, 0};
    if (n < 128) return {~std::uint64_t{0}, (std::uint64_t{1} << (n - 64)) - 1};
    return {~std::uint64_t{0}, ~std::uint64_t{0}};
  }

  static constexpr VertexSet single(unsigned v) {
    return v < 64 ? VertexSet{std::uint64_t{1} << v, 0}
                  : VertexSet{0, std::uint64_t{1} << (v - 64)};
  }

  constexpr bool contains(unsigned v) const {
    return v < 64 ? (lo >> v) & 1u : (hi >> (v - 64)) & 1u;
  }
  constexpr void insert(unsigned v) { *this = *this | single(v); }
  constexpr void erase(unsigned v) { *this = and_not(single(v)); }

  constexpr bool empty() const { return (lo | hi) == 0; }
  constexpr unsigned count() const {
    return static_cast<unsigned>(std::popcount(lo) + std::popcount(hi));
  }
  /// Smallest element; undefined on the empty set.
  constexpr unsigned first() const {
    return lo != 0 ? static_cast<unsigned>(std::countr_zero(lo))
                   : 64u + static_cast<unsigned>(std::countr_zero(hi));
  }

  constexpr VertexSet and_not(VertexSet o) const { return {lo & ~o.lo, hi & ~o.hi}; }
  constexpr bool subset_of(VertexSet o) const { return and_not(o).empty(); }
  constexpr bool intersects(VertexSet o) const { return ((lo & o.lo) | (hi & o.hi)) != 0; }

  friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return {a.lo | b.lo, a.hi | b.hi}; }
  friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return {a.lo & b.lo, a.hi & b.hi}; }
  friend constexpr bool operator==(VertexSet a, VertexSet b) = default;

  VertexSet& operator|=(VertexSet o) { return *this = *this | o; }
  VertexSet& operator&=(VertexSet o) { return *this = *this & o; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t w = lo; w != 0; w &= w - 1) fn(static_cast<unsigned>(std::countr_zero(w)));
    for (std::uint64_t w = hi; w != 0; w &= w - 1) fn(64u + static_cast<unsigned>(std::countr_zero(w)));
  }

  std::vector<unsigned> to_vector() const {
    std::vector<unsigned> out;
    out.reserve(count());
    for_each([&](unsigned v) { out.push_back(v); });
    return out;
  }
};

static_assert(sizeof(VertexSet) == 16);

}  // namespace hyperalpha
