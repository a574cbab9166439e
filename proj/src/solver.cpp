#include "hyperalpha/solver.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hyperalpha/error.hpp"
#include "hyperalpha/kernels.hpp"

namespace hyperalpha {

void validate_level(const Hypergraph& h, unsigned j) {
  if (j < 1 || j + 1 > h.k())
    throw DomainError("independence level j = " + std::to_string(j) + " must lie in [1, k-1] for k = " +
                      std::to_string(h.k()));
}

bool is_j_independent(const Hypergraph& h, std::span<const unsigned> s, unsigned j) {
  std::vector<char> in_set(h.n(), 0);
  for (unsigned v : s) {
    if (v >= h.n()) throw DomainError("vertex " + std::to_string(v) + " out of range");
    in_set[v] = 1;
  }
  for (std::size_t id = 0; id < h.edge_count(); ++id) {
    unsigned hits = 0;
    for (unsigned v : h.edge(id)) hits += in_set[v];
    if (hits > j) return false;
  }
  return true;
}

bool is_j_independent(const Hypergraph& h, VertexSet s, unsigned j) {
  h.require_masks();
  return kernels::max_intersection(h.edge_masks(), s) <= j;
}

namespace {

class DeadlineGuard {
 public:
  explicit DeadlineGuard(const std::optional<std::chrono::steady_clock::time_point>& deadline)
      : deadline_(deadline) {}

  void tick() {
    if (!deadline_ || (++ticks_ & 0x3ff) != 0) return;
    if (std::chrono::steady_clock::now() > *deadline_) throw TimeoutError("solver deadline exceeded");
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t ticks_ = 0;
};

// Forbidden-vertex propagation for j = k - 1: after adding v, a vertex w
// becomes forbidden when some edge through v has w as its only vertex
// outside the chosen set.
class WeakPropagator {
 public:
  explicit WeakPropagator(const Hypergraph& h) : h_(h) {}

  VertexSet add(unsigned v, VertexSet chosen_with_v) {
    return kernels::single_missing_union(h_.incident_masks(v), chosen_with_v);
  }
  void remove(unsigned) {}

 private:
  const Hypergraph& h_;
};

// Per-edge counts of chosen vertices; once an edge holds j chosen vertices
// its remaining vertices are forbidden.
class CounterPropagator {
 public:
  CounterPropagator(const Hypergraph& h, unsigned j) : h_(h), j_(j), counts_(h.edge_count(), 0) {}

  VertexSet add(unsigned v, VertexSet chosen_with_v) {
    VertexSet forbid;
    for (std::uint32_t id : h_.incident(v)) {
      if (++counts_[id] == j_) forbid |= h_.edge_masks()[id].and_not(chosen_with_v);
    }
    return forbid;
  }
  void remove(unsigned v) {
    for (std::uint32_t id : h_.incident(v)) --counts_[id];
  }

 private:
  const Hypergraph& h_;
  unsigned j_;
  std::vector<unsigned> counts_;
};

// Invariant for every search below: each candidate can be added to the
// chosen set without breaking j-independence.
template <typename Propagator>
class MaxSearch {
 public:
  MaxSearch(Propagator& prop, DeadlineGuard& guard) : prop_(prop), guard_(guard) {}

  void expand(VertexSet chosen, unsigned size, VertexSet cand) {
    ++nodes_;
    guard_.tick();
    if (size > best_) {
      best_ = size;
      best_set_ = chosen;
    }
    while (!cand.empty()) {
      if (size + cand.count() <= best_) return;
      const unsigned v = cand.first();
      cand.erase(v);
      const VertexSet next = chosen | VertexSet::single(v);
      const VertexSet forbid = prop_.add(v, next);
      expand(next, size + 1, cand.and_not(forbid));
      prop_.remove(v);
    }
  }

  unsigned best() const { return best_; }
  VertexSet best_set() const { return best_set_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  Propagator& prop_;
  DeadlineGuard& guard_;
  unsigned best_ = 0;
  VertexSet best_set_;
  std::uint64_t nodes_ = 0;
};

// Visits every j-independent subset of the target size exactly once.
template <typename Propagator, typename Visit>
class SizeSearch {
 public:
  SizeSearch(Propagator& prop, DeadlineGuard& guard, unsigned target, Visit& visit)
      : prop_(prop), guard_(guard), target_(target), visit_(visit) {}

  void expand(VertexSet chosen, unsigned size, VertexSet cand) {
    guard_.tick();
    if (size == target_) {
      visit_(chosen);
      return;
    }
    while (!cand.empty()) {
      if (size + cand.count() < target_) return;
      const unsigned v = cand.first();
      cand.erase(v);
      const VertexSet next = chosen | VertexSet::single(v);
      const VertexSet forbid = prop_.add(v, next);
      expand(next, size + 1, cand.and_not(forbid));
      prop_.remove(v);
    }
  }

 private:
  Propagator& prop_;
  DeadlineGuard& guard_;
  unsigned target_;
  Visit& visit_;
};

SolverPath resolve_path(const Hypergraph& h, unsigned j, SolverPath path) {
  if (path == SolverPath::kAuto) return j + 1 == h.k() ? SolverPath::kWeak : SolverPath::kGeneral;
  if (path == SolverPath::kWeak && j + 1 != h.k())
    throw DomainError("the weak solver path requires j = k - 1");
  return path;
}

// Relabels vertices so that branching order (descending degree, then id)
// coincides with ascending id.
struct Relabeled {
  Hypergraph graph;
  std::vector<unsigned> original;  // original[new id]
};

Relabeled relabel_by_degree(const Hypergraph& h) {
  std::vector<unsigned> order(h.n());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](unsigned a, unsigned b) { return h.degree(a) > h.degree(b); });
  std::vector<unsigned> position(h.n());
  for (unsigned i = 0; i < h.n(); ++i) position[order[i]] = i;
  std::vector<std::vector<unsigned>> edges;
  edges.reserve(h.edge_count());
  for (std::size_t id = 0; id < h.edge_count(); ++id) {
    std::vector<unsigned> e;
    for (unsigned v : h.edge(id)) e.push_back(position[v]);
    edges.push_back(std::move(e));
  }
  return {Hypergraph(h.n(), h.k(), std::move(edges)), std::move(order)};
}

void checked_increment(std::uint64_t& count) {
  if (count == static_cast<std::uint64_t>(INT64_MAX)) throw CapacityError("count exceeds 2^63 - 1");
  ++count;
}

}  // namespace

AlphaResult solve_alpha(const Hypergraph& h, unsigned j, const SolverOptions& options) {
  validate_level(h, j);
  h.require_masks();
  const SolverPath path = resolve_path(h, j, options.path);
  const Relabeled r = relabel_by_degree(h);
  DeadlineGuard guard(options.deadline);

  AlphaResult result;
  auto run = [&](auto& prop) {
    MaxSearch search(prop, guard);
    search.expand({}, 0, VertexSet::prefix(h.n()));
    result.alpha = search.best();
    result.nodes = search.nodes();
    search.best_set().for_each([&](unsigned v) { result.witness.push_back(r.original[v]); });
  };
  if (path == SolverPath::kWeak) {
    WeakPropagator prop(r.graph);
    run(prop);
  } else {
    CounterPropagator prop(r.graph, j);
    run(prop);
  }
  std::sort(result.witness.begin(), result.witness.end());
  return result;
}

unsigned alpha_j(const Hypergraph& h, unsigned j) { return solve_alpha(h, j).alpha; }

std::uint64_t count_independent_sets(const Hypergraph& h, unsigned s, unsigned j,
                                     const SolverOptions& options) {
  validate_level(h, j);
  h.require_masks();
  if (s > h.n()) return 0;
  const SolverPath path = resolve_path(h, j, options.path);
  DeadlineGuard guard(options.deadline);
  std::uint64_t count = 0;
  auto visit = [&](VertexSet) { checked_increment(count); };
  auto run = [&](auto& prop) {
    SizeSearch search(prop, guard, s, visit);
    search.expand({}, 0, VertexSet::prefix(h.n()));
  };
  if (path == SolverPath::kWeak) {
    WeakPropagator prop(h);
    run(prop);
  } else {
    CounterPropagator prop(h, j);
    run(prop);
  }
  return count;
}

std::uint64_t count_maximal_independent_sets(const Hypergraph& h, unsigned s, const SolverOptions& options) {
  h.require_masks();
  if (h.k() < 2) throw DomainError("maximal independent sets need k >= 2");
  if (s > h.n()) return 0;
  DeadlineGuard guard(options.deadline);
  const VertexSet all = VertexSet::prefix(h.n());
  std::uint64_t count = 0;
  auto visit = [&](VertexSet set) {
    bool maximal = true;
    all.and_not(set).for_each([&](unsigned v) {
      if (maximal && kernels::count_contained(h.incident_masks(v), set | VertexSet::single(v)) == 0)
        maximal = false;
    });
    if (maximal) checked_increment(count);
  };
  WeakPropagator prop(h);
  SizeSearch search(prop, guard, s, visit);
  search.expand({}, 0, all);
  return count;
}

}  // namespace hyperalpha
