#include "hyperalpha/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hyperalpha/error.hpp"

namespace hyperalpha {

u128 binomial128(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  u128 c = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // c * (n - i) / (i + 1) without overflowing the intermediate product.
    const u128 num = n - i;
    const u128 den = i + 1;
    const u128 q = c / den;
    const u128 rem = c % den;
    u128 scaled;
    if (__builtin_mul_overflow(q, num, &scaled))
      throw CapacityError("C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows 128 bits");
    u128 next;
    if (__builtin_add_overflow(scaled, rem * num / den, &next))
      throw CapacityError("C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows 128 bits");
    c = next;
  }
  return c;
}

std::uint64_t binomial64(std::uint64_t n, std::uint64_t k) {
  const u128 c = binomial128(n, k);
  if (c > std::numeric_limits<std::uint64_t>::max())
    throw CapacityError("C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows 64 bits");
  return static_cast<std::uint64_t>(c);
}

double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double binomial_real(std::uint64_t x, unsigned k) {
  if (x < k) return 0.0;
  double c = 1.0;
  for (unsigned i = 0; i < k; ++i) c = c * static_cast<double>(x - i) / static_cast<double>(i + 1);
  return c;
}

ColexRanker::ColexRanker(unsigned n, unsigned k) : n_(n), k_(k), table_((n + 1) * (k + 1)) {
  if (k > n) throw DomainError("k must not exceed n");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (unsigned c = 0; c <= n; ++c) {
    for (unsigned i = 0; i <= k; ++i) {
      std::uint64_t v;
      if (i == 0) {
        v = 1;
      } else if (c == 0) {
        v = 0;
      } else {
        // Pascal: C(c, i) = C(c-1, i-1) + C(c-1, i), saturating.
        const std::uint64_t a = choose(c - 1, i - 1);
        const std::uint64_t b = choose(c - 1, i);
        v = (a > kMax - b) ? kMax : a + b;
      }
      table_[c * (k + 1) + i] = v;
    }
  }
  size_ = binomial64(n, k);
}

Rank ColexRanker::rank(std::span<const unsigned> subset) const {
  Rank r = 0;
  for (unsigned i = 0; i < subset.size(); ++i) r += choose(subset[i], i + 1);
  return r;
}

void ColexRanker::unrank(Rank rank, std::span<unsigned> out) const {
  if (rank >= size_) throw DomainError("rank " + std::to_string(rank) + " out of range");
  unsigned c = n_;
  for (unsigned i = k_; i-- > 0;) {
    // Largest c with C(c, i + 1) <= rank; c only decreases across positions.
    while (choose(c, i + 1) > rank) --c;
    out[i] = c;
    rank -= choose(c, i + 1);
  }
}

std::vector<unsigned> ColexRanker::unrank(Rank rank) const {
  std::vector<unsigned> out(k_);
  unrank(rank, out);
  return out;
}

Rank rank_ksubset(unsigned n, unsigned k, std::span<const unsigned> subset) {
  return ColexRanker(n, k).rank(subset);
}

std::vector<unsigned> unrank_ksubset(unsigned n, unsigned k, Rank rank) {
  return ColexRanker(n, k).unrank(rank);
}

bool next_colex(std::span<unsigned> subset, unsigned n) {
  const std::size_t k = subset.size();
  for (std::size_t i = 0; i < k; ++i) {
    const unsigned limit = (i + 1 < k) ? subset[i + 1] : n;
    if (subset[i] + 1 < limit) {
      ++subset[i];
      for (std::size_t j = 0; j < i; ++j) subset[j] = static_cast<unsigned>(j);
      return true;
    }
  }
  return false;
}

}  // namespace hyperalpha
