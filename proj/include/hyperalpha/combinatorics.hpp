#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hyperalpha {

using u128 = unsigned __int128;
/// Index of a k-subset in colexicographic order.
using Rank = std::uint64_t;

/// Exact C(n, k) in 128-bit arithmetic. Throws CapacityError on overflow.
u128 binomial128(std::uint64_t n, std::uint64_t k);

/// C(n, k) when it fits in 64 bits. Throws CapacityError otherwise.
std::uint64_t binomial64(std::uint64_t n, std::uint64_t k);

/// ln C(n, k) via log-gamma; -inf when k > n.
double log_binomial(double n, double k);

/// C(x, k) as a double for real-valued x >= 0 (0 when x < k).
double binomial_real(std::uint64_t x, unsigned k);

/// Table of C(c, i) for c <= n, i <= k, saturating at UINT64_MAX.
///
/// Subsets are ranked colexicographically: the sorted subset
/// s_0 < s_1 < ... < s_{k-1} has rank sum_i C(s_i, i + 1). This order is
/// frozen; sampled hypergraphs and coupling streams are addressed by it.
class ColexRanker {
 public:
  /// Throws CapacityError when C(n, k) does not fit in a Rank.
  ColexRanker(unsigned n, unsigned k);

  unsigned n() const { return n_; }
  unsigned k() const { return k_; }
  Rank size() const { return size_; }

  std::uint64_t choose(unsigned c, unsigned i) const { return table_[c * (k_ + 1) + i]; }

  /// Precondition: `subset` is sorted, strictly increasing, in [0, n), size k.
  Rank rank(std::span<const unsigned> subset) const;
  /// Throws DomainError when rank >= C(n, k).
  void unrank(Rank rank, std::span<unsigned> out) const;
  std::vector<unsigned> unrank(Rank rank) const;

 private:
  unsigned n_;
  unsigned k_;
  Rank size_;
  std::vector<std::uint64_t> table_;
};

Rank rank_ksubset(unsigned n, unsigned k, std::span<const unsigned> subset);
std::vector<unsigned> unrank_ksubset(unsigned n, unsigned k, Rank rank);

/// Advances a sorted k-subset of [0, n) to its colex successor.
/// Returns false (leaving the subset unspecified) after the last one.
bool next_colex(std::span<unsigned> subset, unsigned n);

}  // namespace hyperalpha
