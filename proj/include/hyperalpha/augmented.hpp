#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyperalpha/hypergraph.hpp"

namespace hyperalpha {

/// A vertex set T whose induced sub-hypergraph is a k-matching of r edges
/// and where every vertex v outside T lies in at least two edges contained
/// in T ∪ {v}. Its order is |T| - r: deleting one vertex from each matching
/// edge leaves an independent set of that size, in k^r ways.
struct AugmentedSet {
  std::vector<unsigned> vertices;               ///< T, sorted
  std::vector<std::vector<unsigned>> matching;  ///< the induced edges of T
  unsigned order = 0;
  unsigned r = 0;
};

/// Limits the number of subsets an exhaustive enumeration may examine.
struct EnumerationBudget {
  static constexpr std::uint64_t kDefault = 100'000'000;
  std::uint64_t max_subsets = kDefault;
};

/// Returns the augmented set when `t` is one, with the matching taken as the
/// induced edges of t. Requires n <= 128.
std::optional<AugmentedSet> is_augmented(const Hypergraph& h, std::span<const unsigned> t);

/// All augmented sets of order exactly s, in increasing r then colex order
/// of T. Throws BudgetError when the sweep would exceed the budget.
std::vector<AugmentedSet> enumerate_augmented(const Hypergraph& h, unsigned s,
                                              EnumerationBudget budget = {});

/// Number of augmented sets of order s with exactly r matching edges.
std::uint64_t count_augmented(const Hypergraph& h, unsigned s, unsigned r, EnumerationBudget budget = {});

/// True when some augmented set of order s exists.
bool has_augmented(const Hypergraph& h, unsigned s, EnumerationBudget budget = {});

/// Largest order of an augmented set (0 for the empty vertex set).
unsigned hat_alpha(const Hypergraph& h, EnumerationBudget budget = {});

}  // namespace hyperalpha
