#include "hyperalpha/augmented.hpp"

#include <algorithm>
#include <string>

#include "hyperalpha/error.hpp"
#include "hyperalpha/kernels.hpp"

namespace hyperalpha {
namespace {

// Every vertex outside t has at least two edges inside t ∪ {v} through v.
bool outside_vertices_covered(const Hypergraph& h, VertexSet t) {
  const VertexSet outside = VertexSet::prefix(h.n()).and_not(t);
  bool ok = true;
  outside.for_each([&](unsigned v) {
    if (ok && kernels::count_contained(h.incident_masks(v), t | VertexSet::single(v)) < 2) ok = false;
  });
  return ok;
}

AugmentedSet make_set(const Hypergraph& h, VertexSet t, unsigned r) {
  AugmentedSet a;
  a.vertices = t.to_vector();
  a.r = r;
  a.order = static_cast<unsigned>(a.vertices.size()) - r;
  const auto masks = h.edge_masks();
  for (std::size_t id = 0; id < masks.size(); ++id) {
    if (masks[id].subset_of(t)) {
      auto e = h.edge(id);
      a.matching.emplace_back(e.begin(), e.end());
    }
  }
  return a;
}

// Depth-first sweep over (s + r)-subsets in increasing vertex order. A
// branch dies as soon as the induced edges stop being a matching or exceed
// r; both only get worse as vertices are added.
class Sweep {
 public:
  Sweep(const Hypergraph& h, unsigned size, unsigned r, EnumerationBudget budget, std::uint64_t& examined)
      : h_(h), size_(size), r_(r), budget_(budget), examined_(examined) {}

  template <typename Visit>
  void run(Visit&& visit) {
    expand(VertexSet{}, 0, VertexSet{}, 0, 0, visit);
  }

  bool stopped() const { return stopped_; }
  void stop() { stopped_ = true; }

 private:
  template <typename Visit>
  void expand(VertexSet t, unsigned size, VertexSet covered, unsigned edges, unsigned next, Visit& visit) {
    if (stopped_) return;
    if (++examined_ > budget_.max_subsets)
      throw BudgetError("augmented-set enumeration exceeded " + std::to_string(budget_.max_subsets) +
                        " subsets");
    if (size == size_) {
      if (edges == r_ && outside_vertices_covered(h_, t)) visit(t);
      return;
    }
    for (unsigned v = next; v + (size_ - size) <= h_.n(); ++v) {
      const VertexSet grown = t | VertexSet::single(v);
      unsigned new_edges = 0;
      VertexSet new_cover;
      for (const VertexSet& m : h_.incident_masks(v)) {
        if (m.subset_of(grown)) {
          ++new_edges;
          new_cover = m;
        }
      }
      // Two new edges share v; one new edge must miss the existing matching.
      if (new_edges > 1) continue;
      if (new_edges == 1 && (edges == r_ || new_cover.intersects(covered))) continue;
      expand(grown, size + 1, covered | new_cover, edges + new_edges, v + 1, visit);
      if (stopped_) return;
    }
  }

  const Hypergraph& h_;
  unsigned size_;
  unsigned r_;
  EnumerationBudget budget_;
  std::uint64_t& examined_;
  bool stopped_ = false;
};

unsigned max_r(const Hypergraph& h, unsigned s) {
  // r <= s / (k - 1) and |T| = s + r <= n.
  if (s > h.n()) return 0;
  return std::min(s / (h.k() - 1), h.n() - s);
}

void require_supported(const Hypergraph& h) {
  h.require_masks();
  if (h.k() < 2) throw DomainError("augmented sets need k >= 2");
}

}  // namespace

std::optional<AugmentedSet> is_augmented(const Hypergraph& h, std::span<const unsigned> t) {
  require_supported(h);
  VertexSet set;
  for (unsigned v : t) {
    if (v >= h.n()) throw DomainError("vertex " + std::to_string(v) + " out of range");
    set.insert(v);
  }
  VertexSet covered;
  unsigned r = 0;
  for (const VertexSet& m : h.edge_masks()) {
    if (!m.subset_of(set)) continue;
    if (m.intersects(covered)) return std::nullopt;
    covered |= m;
    ++r;
  }
  if (!outside_vertices_covered(h, set)) return std::nullopt;
  return make_set(h, set, r);
}

std::vector<AugmentedSet> enumerate_augmented(const Hypergraph& h, unsigned s, EnumerationBudget budget) {
  require_supported(h);
  std::vector<AugmentedSet> out;
  if (s > h.n()) return out;
  std::uint64_t examined = 0;
  for (unsigned r = 0; r <= max_r(h, s); ++r) {
    Sweep sweep(h, s + r, r, budget, examined);
    sweep.run([&](VertexSet t) { out.push_back(make_set(h, t, r)); });
  }
  return out;
}

std::uint64_t count_augmented(const Hypergraph& h, unsigned s, unsigned r, EnumerationBudget budget) {
  require_supported(h);
  if (s > h.n() || r > max_r(h, s)) return 0;
  std::uint64_t count = 0;
  std::uint64_t examined = 0;
  Sweep sweep(h, s + r, r, budget, examined);
  sweep.run([&](VertexSet) { ++count; });
  return count;
}

bool has_augmented(const Hypergraph& h, unsigned s, EnumerationBudget budget) {
  require_supported(h);
  if (s > h.n()) return false;
  std::uint64_t examined = 0;
  for (unsigned r = 0; r <= max_r(h, s); ++r) {
    Sweep sweep(h, s + r, r, budget, examined);
    bool found = false;
    sweep.run([&](VertexSet) {
      found = true;
      sweep.stop();
    });
    if (found) return true;
  }
  return false;
}

unsigned hat_alpha(const Hypergraph& h, EnumerationBudget budget) {
  require_supported(h);
  for (unsigned s = h.n(); s > 0; --s)
    if (has_augmented(h, s, budget)) return s;
  return 0;
}

}  // namespace hyperalpha
