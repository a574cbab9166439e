#include <algorithm>

#include "hyperalpha/kernels.hpp"

namespace hyperalpha::kernels::scalar {

std::size_t count_contained(std::span<const VertexSet> masks, VertexSet s) {
  std::size_t n = 0;
  for (const VertexSet& m : masks) n += m.subset_of(s) ? 1 : 0;
  return n;
}

unsigned max_intersection(std::span<const VertexSet> masks, VertexSet s) {
  unsigned best = 0;
  for (const VertexSet& m : masks) best = std::max(best, (m & s).count());
  return best;
}

VertexSet single_missing_union(std::span<const VertexSet> masks, VertexSet s) {
  VertexSet acc;
  for (const VertexSet& m : masks) {
    const VertexSet missing = m.and_not(s);
    if (missing.count() == 1) acc |= missing;
  }
  return acc;
}

}  // namespace hyperalpha::kernels::scalar
