#include <random>
#include <vector>

#include "doctest.h"
#include "hyperalpha/kernels.hpp"

using namespace hyperalpha;

namespace {

VertexSet random_set(std::mt19937_64& gen, unsigned n, double density) {
  std::bernoulli_distribution coin(density);
  VertexSet s;
  for (unsigned v = 0; v < n; ++v)
    if (coin(gen)) s.insert(v);
  return s;
}

VertexSet random_edge(std::mt19937_64& gen, unsigned n, unsigned k) {
  std::uniform_int_distribution<unsigned> pick(0, n - 1);
  VertexSet e;
  while (e.count() < k) e.insert(pick(gen));
  return e;
}

}  // namespace

TEST_CASE("VertexSet basics across both words") {
  VertexSet s = VertexSet::prefix(70);
  CHECK(s.count() == 70);
  CHECK(s.contains(69));
  CHECK_FALSE(s.contains(70));
  s.erase(0);
  CHECK(s.first() == 1);
  CHECK(VertexSet::prefix(128).count() == 128);
  CHECK(VertexSet::single(100).subset_of(VertexSet::prefix(101)));
  CHECK(VertexSet::single(100).to_vector() == std::vector<unsigned>{100});
}

TEST_CASE("scalar kernels against direct loops") {
  std::mt19937_64 gen(1);
  for (int rep = 0; rep < 200; ++rep) {
    const unsigned n = 3 + gen() % 126;
    const unsigned k = 2 + gen() % 3;
    std::vector<VertexSet> masks(gen() % 40);
    for (auto& m : masks) m = random_edge(gen, n, k);
    const VertexSet s = random_set(gen, n, 0.7);
    std::size_t contained = 0;
    unsigned widest = 0;
    VertexSet single;
    for (const auto& m : masks) {
      contained += m.subset_of(s);
      widest = std::max(widest, (m & s).count());
      if (m.and_not(s).count() == 1) single |= m.and_not(s);
    }
    CHECK(kernels::scalar::count_contained(masks, s) == contained);
    CHECK(kernels::scalar::max_intersection(masks, s) == widest);
    CHECK(kernels::scalar::single_missing_union(masks, s) == single);
  }
}

#if defined(HYPERALPHA_HAVE_AVX2)
TEST_CASE("avx2 kernels equal the scalar kernels") {
  if (!kernels::avx2_available()) return;
  std::mt19937_64 gen(2);
  for (int rep = 0; rep < 2000; ++rep) {
    const unsigned n = 3 + gen() % 126;
    const unsigned k = 2 + gen() % 4;
    std::vector<VertexSet> masks(gen() % 70);  // odd and even lengths
    for (auto& m : masks) m = random_edge(gen, std::max(n, k), k);
    const VertexSet s = random_set(gen, n, rep % 2 ? 0.9 : 0.4);
    CHECK(kernels::avx2::count_contained(masks, s) == kernels::scalar::count_contained(masks, s));
    CHECK(kernels::avx2::max_intersection(masks, s) == kernels::scalar::max_intersection(masks, s));
    CHECK(kernels::avx2::single_missing_union(masks, s) == kernels::scalar::single_missing_union(masks, s));
  }
}
#endif

TEST_CASE("kernel selection can be forced") {
  const auto before = kernels::active_isa();
  kernels::force_isa(kernels::Isa::kScalar);
  CHECK(kernels::active_isa() == kernels::Isa::kScalar);
  if (kernels::avx2_available()) {
    kernels::force_isa(kernels::Isa::kAvx2);
    CHECK(kernels::active_isa() == kernels::Isa::kAvx2);
  }
  kernels::force_isa(before);
}
