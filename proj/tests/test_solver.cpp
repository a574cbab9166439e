#include <random>

#include "doctest.h"
#include "hyperalpha/error.hpp"
#include "hyperalpha/rng.hpp"
#include "hyperalpha/solver.hpp"
#include "oracles.hpp"

using namespace hyperalpha;

namespace {

Hypergraph two_edges() { return Hypergraph(5, 3, {{0, 1, 2}, {0, 3, 4}}); }

// Maximum independent set of a plain graph by recursion on the lowest vertex.
unsigned graph_mis(std::vector<std::uint32_t> adj, std::uint32_t alive) {
  if (alive == 0) return 0;
  const unsigned v = static_cast<unsigned>(__builtin_ctz(alive));
  const std::uint32_t without = alive & ~(1u << v);
  const unsigned skip = graph_mis(adj, without);
  const unsigned take = 1 + graph_mis(adj, without & ~adj[v]);
  return std::max(skip, take);
}

}  // namespace

TEST_CASE("is_j_independent examples") {
  const Hypergraph single(5, 3, {{0, 1, 2}});
  const unsigned whole[] = {0, 1, 2};
  CHECK_FALSE(is_j_independent(single, whole, 2));
  const unsigned tail[] = {2, 3, 4};
  CHECK(is_j_independent(two_edges(), tail, 2));
  CHECK_FALSE(is_j_independent(two_edges(), tail, 1));
  const unsigned pair[] = {0, 1};
  CHECK(is_j_independent(Hypergraph::complete(5, 3), pair, 2));
  CHECK(is_j_independent(Hypergraph::complete(5, 3), VertexSet::single(4) | VertexSet::single(1), 2));
  const unsigned bad[] = {9};
  CHECK_THROWS_AS(is_j_independent(single, bad, 2), DomainError);
}

TEST_CASE("alpha examples") {
  CHECK(alpha_j(Hypergraph::empty(9, 3), 2) == 9);
  CHECK(alpha_j(Hypergraph::empty(9, 3), 1) == 9);
  for (unsigned k = 2; k <= 5; ++k) CHECK(alpha_j(Hypergraph::complete(8, k), k - 1) == k - 1);
  const AlphaResult r = solve_alpha(two_edges(), 2);
  CHECK(r.alpha == 4);
  CHECK(is_j_independent(two_edges(), r.witness, 2));
  CHECK(r.witness.size() == 4);
  CHECK_THROWS_AS(alpha_j(two_edges(), 3), DomainError);
  CHECK_THROWS_AS(alpha_j(two_edges(), 0), DomainError);
  CHECK_THROWS_AS(solve_alpha(two_edges(), 1, {SolverPath::kWeak, {}}), DomainError);
  CHECK_THROWS_AS(alpha_j(Hypergraph::empty(129, 3), 2), CapacityError);
}

TEST_CASE("alpha equals brute force on every 3-uniform hypergraph on 5 vertices") {
  for (std::uint64_t pick = 0; pick < 1024; ++pick) {
    const Hypergraph h = oracle::from_pick(5, 3, pick);
    for (unsigned j = 1; j <= 2; ++j) {
      const AlphaResult general = solve_alpha(h, j, {SolverPath::kGeneral, {}});
      REQUIRE(general.alpha == oracle::alpha(h, j));
      CHECK(is_j_independent(h, general.witness, j));
      CHECK(general.witness.size() == general.alpha);
    }
    CHECK(solve_alpha(h, 2, {SolverPath::kWeak, {}}).alpha == oracle::alpha(h, 2));
  }
}

TEST_CASE("alpha equals brute force on random instances at n = 9") {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 10000; ++i) {
    const unsigned k = 3 + (i % 2);
    const double p = std::uniform_real_distribution<double>(0.05, 0.9)(gen);
    const Hypergraph h = sample_hnkp({9, k, p, gen()});
    for (unsigned j = 1; j < k; ++j) REQUIRE(alpha_j(h, j) == oracle::alpha(h, j));
    if (k == 3) REQUIRE(solve_alpha(h, 2, {SolverPath::kGeneral, {}}).alpha == oracle::alpha(h, 2));
  }
}

TEST_CASE("k = 2 agrees with a graph independent set reference") {
  for (unsigned n = 2; n <= 12; ++n) {
    for (double p : {0.2, 0.5, 0.8}) {
      for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Hypergraph g = sample_hnkp({n, 2, p, rng::derive(n, seed)});
        std::vector<std::uint32_t> adj(n, 0);
        for (std::size_t id = 0; id < g.edge_count(); ++id) {
          const auto e = g.edge(id);
          adj[e[0]] |= 1u << e[1];
          adj[e[1]] |= 1u << e[0];
        }
        CHECK(alpha_j(g, 1) == graph_mis(adj, (1u << n) - 1));
      }
    }
  }
}

TEST_CASE("alpha is monotone in j and under added edges") {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 300; ++i) {
    const unsigned n = 8 + gen() % 20;
    const unsigned k = 3 + gen() % 3;
    const Hypergraph h = sample_hnkp({n, k, 0.2, gen()});
    unsigned prev = 0;
    for (unsigned j = 1; j < k; ++j) {
      const unsigned a = alpha_j(h, j);
      CHECK(a >= prev);
      prev = a;
    }
    auto edges = h.edges();
    const auto extra = unrank_ksubset(n, k, gen() % binomial64(n, k));
    if (!h.has_edge(extra)) {
      edges.push_back(extra);
      const Hypergraph bigger(n, k, edges);
      for (unsigned j = 1; j < k; ++j) CHECK(alpha_j(bigger, j) <= alpha_j(h, j));
    }
  }
}

TEST_CASE("weak and general paths agree on larger instances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Hypergraph h = sample_hnkp({40, 3, 0.15, seed});
    CHECK(solve_alpha(h, 2, {SolverPath::kWeak, {}}).alpha == solve_alpha(h, 2, {SolverPath::kGeneral, {}}).alpha);
  }
}

TEST_CASE("solver honours a deadline") {
  const Hypergraph h = sample_hnkp({110, 3, 0.02, 1});
  SolverOptions opts;
  opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(solve_alpha(h, 2, opts), TimeoutError);
}

TEST_CASE("count_independent_sets examples and oracle") {
  CHECK(count_independent_sets(Hypergraph::empty(7, 3), 3, 2) == 35);
  CHECK(count_independent_sets(Hypergraph::complete(5, 3), 3, 2) == 0);
  CHECK(count_independent_sets(Hypergraph(5, 3, {{0, 1, 2}}), 3, 2) == 9);
  CHECK(count_independent_sets(Hypergraph::empty(7, 3), 8, 2) == 0);
  std::mt19937_64 gen(5);
  for (int i = 0; i < 400; ++i) {
    const unsigned n = 5 + gen() % 6;
    const unsigned k = 3 + gen() % 2;
    const Hypergraph h = sample_hnkp({n, k, 0.4, gen()});
    for (unsigned s = 0; s <= n; ++s)
      for (unsigned j = 1; j < k; ++j) REQUIRE(count_independent_sets(h, s, j) == oracle::count_independent(h, s, j));
  }
}

TEST_CASE("count_maximal_independent_sets examples and oracle") {
  CHECK(count_maximal_independent_sets(Hypergraph::empty(6, 3), 6) == 1);
  CHECK(count_maximal_independent_sets(Hypergraph::empty(6, 3), 5) == 0);
  for (unsigned s = 0; s <= 5; ++s)
    CHECK(count_maximal_independent_sets(two_edges(), s) == oracle::count_maximal(two_edges(), s));
  CHECK(count_maximal_independent_sets(two_edges(), 4) == 1);
  std::mt19937_64 gen(6);
  for (int i = 0; i < 400; ++i) {
    const unsigned n = 5 + gen() % 6;
    const Hypergraph h = sample_hnkp({n, 3, 0.5, gen()});
    for (unsigned s = 0; s <= n; ++s) REQUIRE(count_maximal_independent_sets(h, s) == oracle::count_maximal(h, s));
  }
}
