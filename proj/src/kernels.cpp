#include <cstdlib>
#include <cstring>

#include "hyperalpha/error.hpp"
#include "hyperalpha/kernels.hpp"

namespace hyperalpha::kernels {
namespace {

struct Table {
  Isa isa;
  std::size_t (*count_contained)(std::span<const VertexSet>, VertexSet);
  unsigned (*max_intersection)(std::span<const VertexSet>, VertexSet);
  VertexSet (*single_missing_union)(std::span<const VertexSet>, VertexSet);
};

constexpr Table kScalar{Isa::kScalar, scalar::count_contained, scalar::max_intersection,
                        scalar::single_missing_union};
#if defined(HYPERALPHA_HAVE_AVX2)
constexpr Table kAvx2{Isa::kAvx2, avx2::count_contained, avx2::max_intersection,
                      avx2::single_missing_union};
#endif

const Table* detect() {
  const char* env = std::getenv("HYPERALPHA_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
  if (avx2_available()) {
#if defined(HYPERALPHA_HAVE_AVX2)
    return &kAvx2;
#endif
  }
  return &kScalar;
}

const Table*& active() {
  static const Table* table = detect();
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(HYPERALPHA_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return active()->isa; }

void force_isa(Isa isa) {
  if (isa == Isa::kScalar) {
    active() = &kScalar;
    return;
  }
#if defined(HYPERALPHA_HAVE_AVX2)
  if (avx2_available()) {
    active() = &kAvx2;
    return;
  }
#endif
  throw DomainError("AVX2 kernels are not available on this machine");
}

std::size_t count_contained(std::span<const VertexSet> masks, VertexSet s) {
  return active()->count_contained(masks, s);
}

unsigned max_intersection(std::span<const VertexSet> masks, VertexSet s) {
  return active()->max_intersection(masks, s);
}

VertexSet single_missing_union(std::span<const VertexSet> masks, VertexSet s) {
  return active()->single_missing_union(masks, s);
}

}  // namespace hyperalpha::kernels
