#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "hyperalpha/vertex_set.hpp"

// Edge-mask scans used on the solver and enumeration hot paths. Each
// operation takes an array of edge masks and a vertex set and reduces over
// the array. There is a scalar reference implementation and an AVX2 variant;
// the public entry points dispatch at runtime to the best variant the CPU
// supports. Both variants must return identical results on every input.
namespace hyperalpha::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// Variant the dispatching entry points use. Chosen once from CPUID, unless
/// HYPERALPHA_KERNELS=scalar is set in the environment.
Isa active_isa();
/// True when the AVX2 variant is compiled in and the CPU supports it.
bool avx2_available();
/// Overrides the active variant (tests and benchmarks). Throws DomainError
/// when forcing an unavailable variant.
void force_isa(Isa isa);

/// Number of masks m with m a subset of s.
std::size_t count_contained(std::span<const VertexSet> masks, VertexSet s);
/// max |m & s| over masks; 0 for an empty array.
unsigned max_intersection(std::span<const VertexSet> masks, VertexSet s);
/// Union of (m \ s) over the masks with exactly one vertex outside s.
VertexSet single_missing_union(std::span<const VertexSet> masks, VertexSet s);

namespace scalar {
std::size_t count_contained(std::span<const VertexSet> masks, VertexSet s);
unsigned max_intersection(std::span<const VertexSet> masks, VertexSet s);
VertexSet single_missing_union(std::span<const VertexSet> masks, VertexSet s);
}  // namespace scalar

#if defined(HYPERALPHA_HAVE_AVX2)
namespace avx2 {
std::size_t count_contained(std::span<const VertexSet> masks, VertexSet s);
unsigned max_intersection(std::span<const VertexSet> masks, VertexSet s);
VertexSet single_missing_union(std::span<const VertexSet> masks, VertexSet s);
}  // namespace avx2
#endif

}  // namespace hyperalpha::kernels
