#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "hyperalpha/combinatorics.hpp"
#include "hyperalpha/vertex_set.hpp"

namespace hyperalpha {

/// Immutable k-uniform hypergraph on vertices {0, ..., n-1}.
///
/// Edges are stored as sorted vertex arrays in canonical (colexicographic)
/// order, so two hypergraphs with the same edge set compare equal. When
/// n <= VertexSet::kCapacity each edge also has a bitmask, and every vertex
/// has a contiguous array of the masks of its incident edges; the exact
/// solvers require these.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Validates and canonicalizes. Throws DomainError on an edge of the
  /// wrong size, a repeated or out-of-range vertex, or a duplicate edge.
  Hypergraph(unsigned n, unsigned k, std::vector<std::vector<unsigned>> edges);

  static Hypergraph empty(unsigned n, unsigned k);
  static Hypergraph complete(unsigned n, unsigned k);

  /// Trusted construction from edges already sorted, distinct and in
  /// canonical order; `flat` holds edge_count * k vertex ids.
  static Hypergraph from_canonical(unsigned n, unsigned k, std::vector<unsigned> flat);

  unsigned n() const { return n_; }
  unsigned k() const { return k_; }
  std::size_t edge_count() const { return k_ == 0 ? 0 : vertices_.size() / k_; }

  std::span<const unsigned> edge(std::size_t id) const {
    return {vertices_.data() + id * k_, k_};
  }
  std::vector<std::vector<unsigned>> edges() const;

  /// Ids of the edges containing v.
  std::span<const std::uint32_t> incident(unsigned v) const {
    return {incident_ids_.data() + incident_offsets_[v],
            incident_offsets_[v + 1] - incident_offsets_[v]};
  }
  unsigned degree(unsigned v) const {
    return static_cast<unsigned>(incident_offsets_[v + 1] - incident_offsets_[v]);
  }

  bool has_masks() const { return n_ <= VertexSet::kCapacity; }
  std::span<const VertexSet> edge_masks() const { return edge_masks_; }
  std::span<const VertexSet> incident_masks(unsigned v) const {
    return {incident_masks_.data() + incident_offsets_[v],
            incident_offsets_[v + 1] - incident_offsets_[v]};
  }
  /// Throws CapacityError when n exceeds the mask width.
  void require_masks() const;

  /// True when `sorted_edge` (strictly increasing, size k) is an edge.
  bool has_edge(std::span<const unsigned> sorted_edge) const;

  /// Rebuilds the incidence index from the edge list and compares.
  bool incidence_consistent() const;

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.vertices_ == b.vertices_;
  }

 private:
  void build_index();

  unsigned n_ = 0;
  unsigned k_ = 2;
  std::vector<unsigned> vertices_;
  std::vector<std::size_t> incident_offsets_{0};
  std::vector<std::uint32_t> incident_ids_;
  std::vector<VertexSet> edge_masks_;
  std::vector<VertexSet> incident_masks_;
};

/// Colexicographic comparison of two sorted k-subsets.
bool colex_less(std::span<const unsigned> a, std::span<const unsigned> b);

/// Parameters of the binomial model H(n, k, p).
struct ModelParams {
  unsigned n = 0;
  unsigned k = 2;
  double p = 0.0;
  std::uint64_t seed = 0;

  /// Throws DomainError unless 2 <= k <= n and 0 <= p <= 1.
  void validate() const;
};

enum class SamplerStrategy {
  kAuto,       ///< kEnumerate when C(n,k) <= kEnumerationCap, else kSparse
  kEnumerate,  ///< one Bernoulli trial per k-subset, addressed by rank
  kSparse,     ///< m ~ Binomial(C(n,k), p), then m distinct uniform ranks
};

inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 22;

/// Samples H(n, k, p) deterministically from params.seed.
///
/// Under kEnumerate the subset with colex rank r is an edge iff
/// rng::uniform_at(seed, r) < p, so two calls with the same seed and
/// p1 < p2 give nested edge sets. kSparse draws from a different stream;
/// both strategies have the same distribution. Throws CapacityError when
/// C(n, k) does not fit in 63 bits.
Hypergraph sample_hnkp(const ModelParams& params, SamplerStrategy strategy = SamplerStrategy::kAuto);

/// Sub-hypergraph induced on a vertex subset, relabeled 0..|s|-1.
struct InducedHypergraph {
  Hypergraph graph;
  /// original_vertex[i] is the vertex of the host that became i.
  std::vector<unsigned> original_vertex;
};

/// Edges of h fully inside `subset`. Duplicates in `subset` are ignored;
/// throws DomainError on a vertex outside [0, n).
InducedHypergraph induced(const Hypergraph& h, std::span<const unsigned> subset);

/// Text format: first line "n k m", then m lines of k strictly increasing
/// 0-based vertex ids separated by single spaces. Edges are written in
/// canonical order.
void write_hypergraph(std::ostream& out, const Hypergraph& h);
void write_hypergraph_file(const std::filesystem::path& path, const Hypergraph& h);

/// Throws ParseError with the 1-based line of the first problem.
Hypergraph read_hypergraph(std::istream& in);
Hypergraph read_hypergraph_file(const std::filesystem::path& path);

}  // namespace hyperalpha
