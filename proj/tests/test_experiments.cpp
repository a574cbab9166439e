#include <sstream>

#include "doctest.h"
#include "hyperalpha/error.hpp"
#include "hyperalpha/experiments.hpp"
#include "hyperalpha/rng.hpp"
#include "hyperalpha/solver.hpp"

using namespace hyperalpha;

namespace {

ExperimentConfig config(ExperimentMode mode, unsigned n, unsigned k, double p, std::uint64_t trials) {
  ExperimentConfig c;
  c.model = {n, k, p, 2024};
  c.mode = mode;
  c.trials = trials;
  return c;
}

nlohmann::json without_timing(nlohmann::json j) {
  j.erase("total_micros");
  for (auto& r : j["records"]) r.erase("micros");
  return j;
}

}  // namespace

TEST_CASE("config validation") {
  auto c = config(ExperimentMode::kExpectation, 10, 3, 0.5, 5);
  CHECK_THROWS_AS(c.validate(), DomainError);  // missing s
  c.s = 4;
  c.validate();
  c.r = 3;
  CHECK_THROWS_AS(c.validate(), DomainError);
  auto cp = config(ExperimentMode::kCoupling, 10, 3, 0.5, 5);
  CHECK_THROWS_AS(cp.validate(), DomainError);
  cp.p2 = 0.2;
  CHECK_THROWS_AS(cp.validate(), DomainError);
  auto z = config(ExperimentMode::kConcentration, 10, 3, 0.5, 0);
  CHECK_THROWS_AS(z.validate(), DomainError);
  auto ex = config(ExperimentMode::kAugmentedFuzz, 7, 3, 0.5, 1);
  ex.exhaustive = true;
  CHECK_THROWS_AS(ex.validate(), DomainError);
  CHECK(parse_mode("lemma1") == ExperimentMode::kAugmentedFuzz);
  CHECK_THROWS_AS(parse_mode("nope"), DomainError);
}

TEST_CASE("concentration trivial cases") {
  const auto full = run_concentration(config(ExperimentMode::kConcentration, 20, 3, 1.0, 5));
  CHECK(full.distribution == std::map<std::int64_t, std::uint64_t>{{2, 5}});
  CHECK(full.variance == 0);
  const auto none = run_concentration(config(ExperimentMode::kConcentration, 20, 3, 0.0, 5));
  CHECK(none.distribution == std::map<std::int64_t, std::uint64_t>{{20, 5}});
  CHECK_FALSE(none.window_low);
}

TEST_CASE("records are reproducible from master seed and index") {
  auto c = config(ExperimentMode::kConcentration, 25, 3, 0.4, 12);
  c.parallelism = 3;
  const auto rep = run_concentration(c);
  REQUIRE(rep.records.size() == 12);
  for (const auto& rec : rep.records) {
    CHECK(rec.seed == rng::derive(2024, rec.trial_index));
    const Hypergraph h = sample_hnkp({25, 3, 0.4, rec.seed});
    CHECK(rec.values[0] == solve_alpha(h, 2).alpha);
  }
  CHECK(rep.window_low);
  CHECK(rep.window_mass);
  ExperimentReport copy = rep;
  copy.distribution.clear();
  copy.mean = -1;
  aggregate(copy);
  CHECK(copy.distribution == rep.distribution);
  CHECK(copy.mean == rep.mean);
}

TEST_CASE("reports are identical across runs and worker counts") {
  for (auto mode : {ExperimentMode::kConcentration, ExperimentMode::kCoupling, ExperimentMode::kExpectation,
                    ExperimentMode::kAugmentedFuzz}) {
    auto c = config(mode, 9, 3, 0.3, 40);
    c.s = 4;
    if (mode != ExperimentMode::kExpectation) c.s.reset();
    if (mode == ExperimentMode::kCoupling) c.p2 = 0.6;
    const auto a = to_json(run_experiment(c));
    const auto b = to_json(run_experiment(c));
    CHECK(without_timing(a) == without_timing(b));
    c.parallelism = 4;
    const auto d = to_json(run_experiment(c));
    CHECK(without_timing(a) == without_timing(d));
    CHECK(a["schema_version"] == kReportSchemaVersion);
    CHECK(a["config"]["rng"] == std::string(kRngVersion));
  }
}

TEST_CASE("augmented fuzz exhaustive and sampled") {
  auto ex = config(ExperimentMode::kAugmentedFuzz, 5, 3, 0.5, 1);
  ex.exhaustive = true;
  const auto rep = run_augmented_fuzz(ex);
  CHECK(rep.records.size() == 1024);
  CHECK(rep.violations == 0);
  const auto sampled = run_augmented_fuzz(config(ExperimentMode::kAugmentedFuzz, 8, 3, 0.5, 300));
  CHECK(sampled.violations == 0);
}

TEST_CASE("expectation check") {
  auto c = config(ExperimentMode::kExpectation, 8, 3, 1.0, 4);
  c.s = 4;
  const auto full = run_expectation_check(c);
  REQUIRE(full.comparisons.size() == 2);
  CHECK(full.comparisons[0].analytic == 0);
  CHECK(full.comparisons[0].empirical == 0);
  REQUIRE(full.comparisons[0].z);
  CHECK(*full.comparisons[0].z == 0);

  auto z = config(ExperimentMode::kExpectation, 6, 3, 0.5, 4000);
  z.s = 3;
  z.r = 1;
  const auto rep = run_expectation_check(z);
  REQUIRE(rep.comparisons.size() == 3);
  for (const auto& cmp : rep.comparisons) {
    REQUIRE(cmp.z);
    CHECK(std::abs(*cmp.z) < 4);
  }
  CHECK(rep.comparisons[2].analytic == doctest::Approx(2.974548).epsilon(1e-6));
}

TEST_CASE("coupling trivial cases") {
  auto same = config(ExperimentMode::kCoupling, 12, 3, 0.3, 20);
  same.p2 = 0.3;
  const auto a = run_coupling(same);
  CHECK(a.violations == 0);
  for (const auto& rec : a.records) CHECK(rec.values[0] == rec.values[1]);

  auto extreme = config(ExperimentMode::kCoupling, 12, 3, 0.0, 10);
  extreme.p2 = 1.0;
  const auto b = run_coupling(extreme);
  CHECK(b.violations == 0);
  CHECK_FALSE(b.overlap);
  for (const auto& rec : b.records) {
    CHECK(rec.values[0] == 12);
    CHECK(rec.values[1] == 2);
  }

  auto mid = config(ExperimentMode::kCoupling, 20, 3, 0.15, 60);
  mid.p2 = 0.3;
  mid.parallelism = 2;
  const auto c = run_coupling(mid);
  CHECK(c.violations == 0);
  REQUIRE(c.overlap);
  CHECK(c.overlap->ci_at_most.low <= c.overlap->prob_at_most);
  CHECK(c.overlap->prob_at_most <= c.overlap->ci_at_most.high);
}

TEST_CASE("wilson interval") {
  const auto w = wilson_interval(50, 100);
  CHECK(w.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(w.high == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK(wilson_interval(0, 10).low == 0);
  CHECK(wilson_interval(10, 10).high == doctest::Approx(1.0));
}

TEST_CASE("timeouts are recorded and excluded") {
  auto c = config(ExperimentMode::kConcentration, 110, 3, 0.02, 2);
  c.timeout_secs = 1e-9;
  const auto rep = run_concentration(c);
  CHECK(rep.timed_out == 2);
  CHECK(rep.completed == 0);
  CHECK(rep.distribution.empty());
  const auto j = to_json(rep);
  CHECK(j["records"][0]["status"] == "timeout");
  CHECK(j["aggregate"]["timed_out"] == 2);
}

TEST_CASE("csv output") {
  auto c = config(ExperimentMode::kConcentration, 10, 3, 0.5, 3);
  const auto rep = run_concentration(c);
  std::ostringstream out;
  write_csv(out, rep);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# schema_version=1", 0) == 0);
  std::getline(in, line);
  CHECK(line == "trial_index,seed,status,alpha,micros");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("concentration demo fixture") {
  auto c = config(ExperimentMode::kConcentration, 60, 3, 0.5, 200);
  c.model.seed = 1001;
  c.parallelism = 2;
  const auto rep = run_concentration(c);
  CHECK(rep.completed == 200);
  // Pinned from the first verified run.
  CHECK(rep.distribution == std::map<std::int64_t, std::uint64_t>{{6, 198}, {7, 2}});
  REQUIRE(rep.window_low);
  CHECK(*rep.window_low == 6);
  REQUIRE(rep.window_mass);
  CHECK(*rep.window_mass == 1.0);
  CHECK(rep.distribution.rbegin()->first - rep.distribution.begin()->first <= 3);
}
