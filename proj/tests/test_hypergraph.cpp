#include <numeric>
#include <sstream>

#include "doctest.h"
#include "hyperalpha/error.hpp"
#include "hyperalpha/hypergraph.hpp"
#include "hyperalpha/rng.hpp"
#include "oracles.hpp"

using namespace hyperalpha;

namespace {

Hypergraph two_edges() { return Hypergraph(5, 3, {{0, 1, 2}, {0, 3, 4}}); }

int parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_hypergraph(in);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

void check_edge_count_distribution(SamplerStrategy strategy, unsigned n, unsigned k, double p, int samples,
                                   double tolerance_se) {
  const double c = static_cast<double>(binomial64(n, k));
  double sum = 0;
  for (int i = 0; i < samples; ++i) {
    const Hypergraph h = sample_hnkp({n, k, p, rng::derive(99, i)}, strategy);
    sum += static_cast<double>(h.edge_count());
  }
  const double se = std::sqrt(c * p * (1 - p) / samples);
  CHECK(std::abs(sum / samples - c * p) < tolerance_se * se);
}

}  // namespace

TEST_CASE("construction canonicalizes and validates") {
  const Hypergraph h(5, 3, {{3, 0, 4}, {2, 1, 0}});
  CHECK(h.edge_count() == 2);
  CHECK(h == two_edges());
  CHECK(h.edges() == std::vector<std::vector<unsigned>>{{0, 1, 2}, {0, 3, 4}});
  CHECK(h.degree(0) == 2);
  CHECK(h.degree(1) == 1);
  CHECK(h.incidence_consistent());
  const unsigned e[] = {0, 3, 4};
  CHECK(h.has_edge(e));
  CHECK_THROWS_AS(Hypergraph(5, 3, {{0, 1}}), DomainError);
  CHECK_THROWS_AS(Hypergraph(5, 3, {{0, 0, 1}}), DomainError);
  CHECK_THROWS_AS(Hypergraph(5, 3, {{0, 1, 5}}), DomainError);
  CHECK_THROWS_AS(Hypergraph(5, 3, {{0, 1, 2}, {2, 1, 0}}), DomainError);
}

TEST_CASE("complete and empty hypergraphs") {
  CHECK(Hypergraph::complete(5, 3).edge_count() == 10);
  CHECK(Hypergraph::empty(5, 3).edge_count() == 0);
  CHECK(Hypergraph::complete(7, 4).incidence_consistent());
}

TEST_CASE("sampler boundary probabilities") {
  CHECK(sample_hnkp({5, 3, 0.0, 1}).edge_count() == 0);
  CHECK(sample_hnkp({5, 3, 1.0, 1}) == Hypergraph::complete(5, 3));
  CHECK(sample_hnkp({5, 3, 1.0, 1}, SamplerStrategy::kSparse) == Hypergraph::complete(5, 3));
  CHECK(sample_hnkp({5, 3, 0.0, 1}, SamplerStrategy::kSparse).edge_count() == 0);
  CHECK_THROWS_AS(sample_hnkp({5, 3, 1.5, 1}), DomainError);
  CHECK_THROWS_AS(sample_hnkp({5, 6, 0.5, 1}), DomainError);
  CHECK_THROWS_AS(sample_hnkp({5, 1, 0.5, 1}), DomainError);
  CHECK_THROWS_AS(sample_hnkp({200, 100, 0.5, 1}), CapacityError);
}

TEST_CASE("sampler is deterministic and canonical") {
  for (auto strategy : {SamplerStrategy::kEnumerate, SamplerStrategy::kSparse}) {
    const Hypergraph a = sample_hnkp({12, 3, 0.4, 5}, strategy);
    const Hypergraph b = sample_hnkp({12, 3, 0.4, 5}, strategy);
    CHECK(a == b);
    CHECK(a.incidence_consistent());
    CHECK(a == Hypergraph(12, 3, a.edges()));
    CHECK(a != sample_hnkp({12, 3, 0.4, 6}, strategy));
  }
}

TEST_CASE("enumerating sampler nests edge sets under a shared seed") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Hypergraph sparse = sample_hnkp({15, 3, 0.1, seed}, SamplerStrategy::kEnumerate);
    const Hypergraph dense = sample_hnkp({15, 3, 0.3, seed}, SamplerStrategy::kEnumerate);
    for (std::size_t id = 0; id < sparse.edge_count(); ++id) CHECK(dense.has_edge(sparse.edge(id)));
  }
}

TEST_CASE("edge count mean for both strategies") {
  check_edge_count_distribution(SamplerStrategy::kEnumerate, 12, 3, 0.3, 100000, 3);
  check_edge_count_distribution(SamplerStrategy::kSparse, 12, 3, 0.3, 100000, 3);
  check_edge_count_distribution(SamplerStrategy::kSparse, 12, 3, 0.8, 20000, 4);
  check_edge_count_distribution(SamplerStrategy::kSparse, 40, 4, 0.001, 20000, 4);
  check_edge_count_distribution(SamplerStrategy::kEnumerate, 9, 4, 0.5, 20000, 4);
}

TEST_CASE("sparse sampler covers every subset uniformly") {
  // Each of the 20 subsets of a 6-set should appear with probability p.
  const unsigned n = 6;
  const unsigned k = 3;
  const double p = 0.25;
  const int samples = 40000;
  std::vector<int> hits(20, 0);
  for (int i = 0; i < samples; ++i) {
    const Hypergraph h = sample_hnkp({n, k, p, rng::derive(3, i)}, SamplerStrategy::kSparse);
    for (std::size_t id = 0; id < h.edge_count(); ++id) ++hits[rank_ksubset(n, k, h.edge(id))];
  }
  const double se = std::sqrt(p * (1 - p) / samples);
  for (int c : hits) CHECK(std::abs(static_cast<double>(c) / samples - p) < 4.5 * se);
}

TEST_CASE("induced sub-hypergraphs") {
  const unsigned first3[] = {0, 1, 2};
  CHECK(induced(Hypergraph::complete(5, 3), first3).graph.edge_count() == 1);
  const auto empty = induced(two_edges(), std::span<const unsigned>{});
  CHECK(empty.graph.n() == 0);
  CHECK(empty.graph.edge_count() == 0);
  const unsigned rest[] = {1, 2, 3, 4};
  const auto sub = induced(two_edges(), rest);
  CHECK(sub.graph.edge_count() == 0);
  CHECK(sub.original_vertex == std::vector<unsigned>{1, 2, 3, 4});
  const unsigned odd[] = {4, 0, 3};
  const auto mapped = induced(two_edges(), odd);
  CHECK(mapped.graph.edge_count() == 1);
  CHECK(mapped.original_vertex == std::vector<unsigned>{0, 3, 4});
  const unsigned bad[] = {7};
  CHECK_THROWS_AS(induced(two_edges(), bad), DomainError);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Hypergraph h = sample_hnkp({10, 3, 0.4, seed});
    std::vector<unsigned> all(10);
    std::iota(all.begin(), all.end(), 0u);
    CHECK(induced(h, all).graph == h);
  }
}

TEST_CASE("text format round trip") {
  std::istringstream in("3 2 1\n0 1\n");
  const Hypergraph g = read_hypergraph(in);
  CHECK(g.n() == 3);
  CHECK(g.edges() == std::vector<std::vector<unsigned>>{{0, 1}});

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Hypergraph h = sample_hnkp({10, 3, 0.5, seed});
    std::stringstream buf;
    write_hypergraph(buf, h);
    CHECK(read_hypergraph(buf) == h);
  }
  std::stringstream out;
  write_hypergraph(out, Hypergraph(5, 3, {{0, 3, 4}, {0, 1, 2}}));
  CHECK(out.str() == "5 3 2\n0 1 2\n0 3 4\n");
}

TEST_CASE("malformed files report the offending line") {
  CHECK(parse_error_line("3 3 1\n0 0 1\n") == 2);
  CHECK(parse_error_line("5 3 1\n0 1\n") == 2);
  CHECK(parse_error_line("5 3 1\n0 1 5\n") == 2);
  CHECK(parse_error_line("5 3 2\n0 1 2\n0 1 2\n") == 3);
  CHECK(parse_error_line("5 3 2\n0 1 2\n") == 3);
  CHECK(parse_error_line("5 3\n") == 1);
  CHECK(parse_error_line("5 x 1\n0 1 2\n") == 1);
  CHECK(parse_error_line("5 6 0\n") == 1);
  CHECK(parse_error_line("5 3 1\n2 1 0\n") == 2);
  CHECK(parse_error_line("5 3 1\n0 1 2\n0 1 3\n") == 3);
  CHECK(parse_error_line("") == 1);
}
