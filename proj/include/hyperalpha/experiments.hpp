#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperalpha/hypergraph.hpp"
#include "json.hpp"

namespace hyperalpha {

inline constexpr int kReportSchemaVersion = 1;

enum class ExperimentMode { kConcentration, kAugmentedFuzz, kExpectation, kCoupling };

std::string mode_name(ExperimentMode mode);
/// Accepts concentration, lemma1, expectation, coupling. Throws DomainError.
ExperimentMode parse_mode(const std::string& name);

struct ExperimentConfig {
  ModelParams model;
  ExperimentMode mode = ExperimentMode::kConcentration;
  std::optional<unsigned> j;   ///< defaults to k - 1
  std::uint64_t trials = 1;
  std::optional<unsigned> s;   ///< expectation: target order
  std::optional<unsigned> r;   ///< expectation: matching size for Z
  std::optional<double> p2;    ///< coupling: the denser probability
  double epsilon = 0.1;        ///< concentration: cutoff exponent for the window
  unsigned parallelism = 1;
  double timeout_secs = 60.0;  ///< per-trial solver deadline
  /// lemma1 only: run every hypergraph on n vertices instead of sampling.
  bool exhaustive = false;

  unsigned level() const { return j.value_or(model.k - 1); }
  /// Throws DomainError on missing or inconsistent mode-specific fields.
  void validate() const;
};

/// One trial. `seed` is rng::derive(master, trial_index), except in
/// exhaustive lemma1 runs where it is the edge bitmask over colex ranks.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::uint64_t seed = 0;
  bool timed_out = false;
  std::vector<std::int64_t> values;  ///< one per report column; empty on timeout
  std::int64_t micros = 0;
};

struct Comparison {
  std::string quantity;
  double analytic = 0;
  double empirical = 0;
  double std_error = 0;
  std::optional<double> z;  ///< absent when std_error is 0 and the values differ
};

struct WilsonInterval {
  double low = 0;
  double high = 0;
};

/// Two-sample estimate of the overlap between alpha at p and at p'.
struct OverlapEstimate {
  double p = 0;
  double p_prime = 0;
  long long a = 0;
  double prob_at_most = 0;   ///< P[alpha(H_p) <= a]
  double prob_at_least = 0;  ///< P[alpha(H_p') >= a]
  WilsonInterval ci_at_most;
  WilsonInterval ci_at_least;
  bool both_exceed_twentieth = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<TrialRecord> records;

  std::uint64_t completed = 0;
  std::uint64_t timed_out = 0;
  /// Distribution, mean and sample variance of columns[0] over completed trials.
  std::map<std::int64_t, std::uint64_t> distribution;
  double mean = 0;
  double variance = 0;
  std::vector<Comparison> comparisons;

  std::optional<unsigned> window_low;  ///< predicted {s_z, s_z + 1}
  std::optional<double> window_mass;

  /// Gated counterexamples: lemma1 mismatches or coupling monotonicity breaks.
  std::uint64_t violations = 0;
  std::optional<OverlapEstimate> overlap;

  std::int64_t total_micros = 0;
};

/// Trials run on `parallelism` threads; records are merged in trial order,
/// so everything but the timing fields depends only on the config.
ExperimentReport run_concentration(const ExperimentConfig& cfg);
ExperimentReport run_augmented_fuzz(const ExperimentConfig& cfg);
ExperimentReport run_expectation_check(const ExperimentConfig& cfg);
ExperimentReport run_coupling(const ExperimentConfig& cfg);
/// Dispatches on cfg.mode.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Recomputes completed, timed_out, distribution, mean and variance from the
/// records.
void aggregate(ExperimentReport& report);

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

nlohmann::json to_json(const ExperimentReport& report);
/// Header: trial_index,seed,status,<columns>,micros.
void write_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace hyperalpha
