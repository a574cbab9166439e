#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyperalpha/hypergraph.hpp"

namespace hyperalpha {

/// Throws DomainError unless 1 <= j <= k - 1.
void validate_level(const Hypergraph& h, unsigned j);

/// True iff every edge A satisfies |A ∩ s| <= j. Works for any n.
bool is_j_independent(const Hypergraph& h, std::span<const unsigned> s, unsigned j);
/// Mask variant; requires h.has_masks().
bool is_j_independent(const Hypergraph& h, VertexSet s, unsigned j);

enum class SolverPath {
  kAuto,     ///< kWeak when j == k - 1, else kGeneral
  kGeneral,  ///< per-edge chosen counters, valid for every j
  kWeak,     ///< forbidden-vertex propagation over masks, j == k - 1 only
};

struct SolverOptions {
  SolverPath path = SolverPath::kAuto;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct AlphaResult {
  unsigned alpha = 0;
  std::vector<unsigned> witness;  ///< a maximum j-independent set, sorted
  std::uint64_t nodes = 0;        ///< search nodes expanded
};

/// Exact j-independence number by branch and bound. Vertices are branched
/// in order of descending degree, ties by id; a node is pruned when
/// |chosen| + |candidates| cannot beat the incumbent. Requires n <= 128.
/// Throws TimeoutError past options.deadline.
AlphaResult solve_alpha(const Hypergraph& h, unsigned j, const SolverOptions& options = {});
unsigned alpha_j(const Hypergraph& h, unsigned j);

/// Number of j-independent s-subsets. Throws CapacityError past 2^63.
std::uint64_t count_independent_sets(const Hypergraph& h, unsigned s, unsigned j,
                                     const SolverOptions& options = {});

/// Number of weakly independent s-subsets S such that S ∪ {v} is not
/// independent for any v outside S.
std::uint64_t count_maximal_independent_sets(const Hypergraph& h, unsigned s,
                                             const SolverOptions& options = {});

}  // namespace hyperalpha
