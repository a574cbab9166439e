#include "hyperalpha/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include <spdlog/spdlog.h>

#include "hyperalpha/analytics.hpp"
#include "hyperalpha/augmented.hpp"
#include "hyperalpha/error.hpp"
#include "hyperalpha/json_util.hpp"
#include "hyperalpha/rng.hpp"
#include "hyperalpha/solver.hpp"

namespace hyperalpha {

std::string mode_name(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kConcentration: return "concentration";
    case ExperimentMode::kAugmentedFuzz: return "lemma1";
    case ExperimentMode::kExpectation: return "expectation";
    case ExperimentMode::kCoupling: return "coupling";
  }
  return "unknown";
}

ExperimentMode parse_mode(const std::string& name) {
  for (auto m : {ExperimentMode::kConcentration, ExperimentMode::kAugmentedFuzz, ExperimentMode::kExpectation,
                 ExperimentMode::kCoupling})
    if (mode_name(m) == name) return m;
  throw DomainError("unknown experiment mode '" + name + "'");
}

// Largest C(n, k) for which lemma1 runs every hypergraph.
constexpr std::uint64_t kExhaustiveEdgeLimit = 20;

void ExperimentConfig::validate() const {
  model.validate();
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (parallelism < 1) throw DomainError("parallelism must be at least 1");
  if (!(timeout_secs > 0)) throw DomainError("timeout must be positive");
  if (j && (*j < 1 || *j + 1 > model.k)) throw DomainError("j must lie in [1, k-1]");
  if (exhaustive && mode != ExperimentMode::kAugmentedFuzz) throw DomainError("exhaustive applies to lemma1 only");
  switch (mode) {
    case ExperimentMode::kConcentration:
      if (!(epsilon > 0 && epsilon < 1)) throw DomainError("epsilon must lie in (0, 1)");
      break;
    case ExperimentMode::kAugmentedFuzz:
      if (j && *j + 1 != model.k) throw DomainError("lemma1 compares weak independence; j must be k-1");
      if (exhaustive && binomial128(model.n, model.k) > kExhaustiveEdgeLimit)
        throw DomainError("exhaustive lemma1 needs C(n, k) <= " + std::to_string(kExhaustiveEdgeLimit));
      break;
    case ExperimentMode::kExpectation:
      if (!s) throw DomainError("expectation mode needs s");
      if (*s > model.n) throw DomainError("s exceeds n");
      if (r) {
        if (static_cast<std::uint64_t>(*r) * (model.k - 1) > *s || *s + *r > model.n)
          throw DomainError("need r <= s/(k-1) and s + r <= n");
      }
      break;
    case ExperimentMode::kCoupling:
      if (!p2) throw DomainError("coupling mode needs p2");
      if (!(*p2 >= model.p && *p2 <= 1.0)) throw DomainError("coupling needs p <= p2 <= 1");
      break;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

struct TrialContext {
  std::uint64_t index;
  std::uint64_t seed;
  SolverOptions solver;
};

using TrialFn = std::function<std::vector<std::int64_t>(const TrialContext&)>;
using SeedFn = std::function<std::uint64_t(std::uint64_t)>;

std::int64_t micros_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, std::uint64_t count, const SeedFn& seed_of,
                                    const TrialFn& trial) {
  std::vector<TrialRecord> records(count);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::uint64_t error_index = count;

  const auto timeout = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_secs));
  auto worker = [&] {
    for (std::uint64_t i; !failed.load() && (i = next.fetch_add(1)) < count;) {
      TrialRecord& rec = records[i];
      rec.trial_index = i;
      rec.seed = seed_of(i);
      const auto start = Clock::now();
      try {
        rec.values = trial({i, rec.seed, {SolverPath::kAuto, start + timeout}});
      } catch (const TimeoutError&) {
        rec.timed_out = true;
        spdlog::warn("trial {} timed out after {} s", i, cfg.timeout_secs);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed = true;
      }
      rec.micros = micros_since(start);
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(cfg.parallelism, count));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return records;
}

SeedFn derived_seeds(std::uint64_t master) {
  return [master](std::uint64_t i) { return rng::derive(master, i); };
}

ExperimentReport start_report(const ExperimentConfig& cfg, ExperimentMode mode) {
  cfg.validate();
  if (cfg.mode != mode) throw DomainError("config mode is " + mode_name(cfg.mode) + ", expected " + mode_name(mode));
  ExperimentReport rep;
  rep.config = cfg;
  return rep;
}

std::vector<double> column_values(const ExperimentReport& rep, std::size_t col) {
  std::vector<double> out;
  for (const auto& rec : rep.records)
    if (!rec.timed_out) out.push_back(static_cast<double>(rec.values.at(col)));
  return out;
}

Comparison compare(const ExperimentReport& rep, std::size_t col, double analytic) {
  const std::vector<double> xs = column_values(rep, col);
  Comparison c;
  c.quantity = rep.columns.at(col);
  c.analytic = analytic;
  if (xs.empty()) return c;
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (xs.size() - 1) : 0.0;
  c.empirical = mean;
  c.std_error = std::sqrt(var / xs.size());
  if (c.std_error > 0) {
    c.z = (mean - analytic) / c.std_error;
  } else if (mean == analytic) {
    c.z = 0.0;
  }
  return c;
}

// Sampled hypergraph at probability p from the per-subset uniforms of `seed`.
Hypergraph coupled_sample(const ModelParams& model, double p, std::uint64_t seed) {
  return sample_hnkp({model.n, model.k, p, seed}, SamplerStrategy::kEnumerate);
}

void finish(ExperimentReport& rep, Clock::time_point start) {
  aggregate(rep);
  rep.total_micros = micros_since(start);
}

}  // namespace

void aggregate(ExperimentReport& rep) {
  rep.completed = 0;
  rep.timed_out = 0;
  rep.distribution.clear();
  for (const auto& rec : rep.records) {
    if (rec.timed_out) {
      ++rep.timed_out;
      continue;
    }
    ++rep.completed;
    ++rep.distribution[rec.values.at(0)];
  }
  const std::vector<double> xs = column_values(rep, 0);
  rep.mean = 0;
  rep.variance = 0;
  if (xs.empty()) return;
  for (double x : xs) rep.mean += x;
  rep.mean /= xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - rep.mean) * (x - rep.mean);
  rep.variance = xs.size() > 1 ? ss / (xs.size() - 1) : 0.0;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = successes / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ExperimentReport run_concentration(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep = start_report(cfg, ExperimentMode::kConcentration);
  rep.columns = {"alpha"};
  const unsigned j = cfg.level();
  rep.records = run_trials(cfg, cfg.trials, derived_seeds(cfg.model.seed), [&](const TrialContext& t) {
    const Hypergraph h = sample_hnkp({cfg.model.n, cfg.model.k, cfg.model.p, t.seed});
    return std::vector<std::int64_t>{solve_alpha(h, j, t.solver).alpha};
  });
  finish(rep, start);

  if (j + 1 == cfg.model.k && cfg.model.p > 0 && cfg.model.p < 1) {
    try {
      const auto pred = analytics::predict(analytics::AnalyticContext(cfg.model.n, cfg.model.k, cfg.model.p, cfg.epsilon));
      rep.window_low = pred.window_low;
      if (rep.completed > 0) {
        std::uint64_t inside = 0;
        for (const auto& [value, count] : rep.distribution)
          if (value == pred.window_low || value == pred.window_high) inside += count;
        rep.window_mass = static_cast<double>(inside) / rep.completed;
      }
    } catch (const DomainError& e) {
      spdlog::info("no predicted window: {}", e.what());
    }
  }
  return rep;
}

ExperimentReport run_augmented_fuzz(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep = start_report(cfg, ExperimentMode::kAugmentedFuzz);
  rep.columns = {"alpha", "hat_alpha"};
  const unsigned n = cfg.model.n;
  const unsigned k = cfg.model.k;

  auto check = [&](const Hypergraph& h, const TrialContext& t) {
    const unsigned alpha = solve_alpha(h, k - 1, t.solver).alpha;
    return std::vector<std::int64_t>{alpha, hat_alpha(h)};
  };

  if (cfg.exhaustive) {
    const ColexRanker ranker(n, k);
    const std::uint64_t subsets = ranker.size();
    rep.records = run_trials(cfg, std::uint64_t{1} << subsets, [](std::uint64_t i) { return i; },
                             [&](const TrialContext& t) {
                               std::vector<unsigned> flat;
                               std::vector<unsigned> edge(k);
                               for (std::uint64_t rank = 0; rank < subsets; ++rank) {
                                 if (!((t.seed >> rank) & 1)) continue;
                                 ranker.unrank(rank, edge);
                                 flat.insert(flat.end(), edge.begin(), edge.end());
                               }
                               return check(Hypergraph::from_canonical(n, k, std::move(flat)), t);
                             });
  } else {
    rep.records = run_trials(cfg, cfg.trials, derived_seeds(cfg.model.seed), [&](const TrialContext& t) {
      return check(sample_hnkp({n, k, cfg.model.p, t.seed}), t);
    });
  }
  finish(rep, start);
  for (const auto& rec : rep.records) {
    if (!rec.timed_out && rec.values[0] != rec.values[1]) {
      ++rep.violations;
      spdlog::error("trial {} (seed {}): alpha {} but hat_alpha {}", rec.trial_index, rec.seed, rec.values[0],
                    rec.values[1]);
    }
  }
  return rep;
}

ExperimentReport run_expectation_check(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep = start_report(cfg, ExperimentMode::kExpectation);
  const unsigned n = cfg.model.n;
  const unsigned k = cfg.model.k;
  const double p = cfg.model.p;
  const unsigned s = *cfg.s;
  rep.columns = {"X", "Y"};
  if (cfg.r) rep.columns.push_back("Z");

  rep.records = run_trials(cfg, cfg.trials, derived_seeds(cfg.model.seed), [&](const TrialContext& t) {
    const Hypergraph h = sample_hnkp({n, k, p, t.seed});
    std::vector<std::int64_t> v{
        static_cast<std::int64_t>(count_independent_sets(h, s, k - 1, t.solver)),
        static_cast<std::int64_t>(count_maximal_independent_sets(h, s, t.solver)),
    };
    if (cfg.r) v.push_back(static_cast<std::int64_t>(count_augmented(h, s, *cfg.r)));
    return v;
  });
  finish(rep, start);

  rep.comparisons.push_back(compare(rep, 0, std::exp(analytics::log_expected_independent(n, k, p, s))));
  rep.comparisons.push_back(compare(rep, 1, std::exp(analytics::log_expected_maximal(n, k, p, s))));
  if (cfg.r)
    rep.comparisons.push_back(compare(rep, 2, std::exp(analytics::log_expected_augmented(n, k, p, s, *cfg.r))));
  return rep;
}

ExperimentReport run_coupling(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep = start_report(cfg, ExperimentMode::kCoupling);
  const ModelParams& model = cfg.model;
  const unsigned j = cfg.level();
  const double p1 = model.p;
  const double p2 = *cfg.p2;

  std::optional<double> p_prime;
  if (p1 > 0 && p1 < 1) p_prime = analytics::anti_schedule(model.n, model.k, j, p1).p_prime;
  rep.columns = {"alpha_p1", "alpha_p2"};
  if (p_prime) rep.columns.push_back("alpha_p_prime");

  rep.records = run_trials(cfg, cfg.trials, derived_seeds(model.seed), [&](const TrialContext& t) {
    std::vector<std::int64_t> v{solve_alpha(coupled_sample(model, p1, t.seed), j, t.solver).alpha,
                                solve_alpha(coupled_sample(model, p2, t.seed), j, t.solver).alpha};
    if (p_prime) v.push_back(solve_alpha(coupled_sample(model, std::min(1.0, *p_prime), t.seed), j, t.solver).alpha);
    return v;
  });
  finish(rep, start);

  // Every pair of coupled hypergraphs is nested, so alpha must not increase
  // with the edge probability.
  std::vector<std::pair<double, std::size_t>> by_p{{p1, 0}, {p2, 1}};
  if (p_prime) by_p.emplace_back(*p_prime, 2);
  std::sort(by_p.begin(), by_p.end());
  for (const auto& rec : rep.records) {
    if (rec.timed_out) continue;
    for (std::size_t a = 0; a + 1 < by_p.size(); ++a) {
      for (std::size_t b = a + 1; b < by_p.size(); ++b) {
        if (rec.values[by_p[b].second] > rec.values[by_p[a].second]) {
          ++rep.violations;
          spdlog::error("trial {}: alpha rose from {} at p={} to {} at p={}", rec.trial_index,
                        rec.values[by_p[a].second], by_p[a].first, rec.values[by_p[b].second], by_p[b].first);
        }
      }
    }
  }

  if (p_prime && rep.completed > 0) {
    const std::vector<double> low = column_values(rep, 0);
    const std::vector<double> high = column_values(rep, 2);
    const auto [lo_min, lo_max] = std::minmax_element(low.begin(), low.end());
    const auto [hi_min, hi_max] = std::minmax_element(high.begin(), high.end());
    const auto a_min = static_cast<long long>(std::min(*lo_min, *hi_min));
    const auto a_max = static_cast<long long>(std::max(*lo_max, *hi_max));
    OverlapEstimate best;
    best.p = p1;
    best.p_prime = *p_prime;
    double best_score = -1;
    std::uint64_t best_at_most = 0;
    std::uint64_t best_at_least = 0;
    for (long long a = a_min; a <= a_max; ++a) {
      const auto at_most = static_cast<std::uint64_t>(std::count_if(low.begin(), low.end(), [&](double x) { return x <= a; }));
      const auto at_least = static_cast<std::uint64_t>(std::count_if(high.begin(), high.end(), [&](double x) { return x >= a; }));
      const double score = std::min(at_most, at_least) / static_cast<double>(rep.completed);
      if (score > best_score) {
        best_score = score;
        best.a = a;
        best_at_most = at_most;
        best_at_least = at_least;
      }
    }
    best.prob_at_most = static_cast<double>(best_at_most) / rep.completed;
    best.prob_at_least = static_cast<double>(best_at_least) / rep.completed;
    best.ci_at_most = wilson_interval(best_at_most, rep.completed);
    best.ci_at_least = wilson_interval(best_at_least, rep.completed);
    best.both_exceed_twentieth = best.prob_at_most > 0.05 && best.prob_at_least > 0.05;
    rep.overlap = best;
  }
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case ExperimentMode::kConcentration: return run_concentration(cfg);
    case ExperimentMode::kAugmentedFuzz: return run_augmented_fuzz(cfg);
    case ExperimentMode::kExpectation: return run_expectation_check(cfg);
    case ExperimentMode::kCoupling: return run_coupling(cfg);
  }
  throw DomainError("unknown experiment mode");
}

namespace {

nlohmann::json optional_json(const std::optional<unsigned>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json config_json(const ExperimentConfig& c) {
  return {
      {"mode", mode_name(c.mode)},
      {"n", c.model.n},
      {"k", c.model.k},
      {"p", json_number(c.model.p)},
      {"seed", c.model.seed},
      {"j", c.level()},
      {"trials", c.trials},
      {"s", optional_json(c.s)},
      {"r", optional_json(c.r)},
      {"p2", c.p2 ? json_number(*c.p2) : nlohmann::json()},
      {"epsilon", json_number(c.epsilon)},
      {"timeout_secs", json_number(c.timeout_secs)},
      {"exhaustive", c.exhaustive},
      {"rng", std::string(kRngVersion)},
  };
}

nlohmann::json interval_json(const WilsonInterval& w) { return {json_number(w.low), json_number(w.high)}; }

}  // namespace

nlohmann::json to_json(const ExperimentReport& rep) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : rep.records) {
    nlohmann::json values = nullptr;
    if (!rec.timed_out) {
      values = nlohmann::json::object();
      for (std::size_t c = 0; c < rep.columns.size(); ++c) values[rep.columns[c]] = rec.values.at(c);
    }
    records.push_back({{"trial_index", rec.trial_index},
                       {"seed", rec.seed},
                       {"status", rec.timed_out ? "timeout" : "ok"},
                       {"values", values},
                       {"micros", rec.micros}});
  }
  nlohmann::json distribution = nlohmann::json::array();
  for (const auto& [value, count] : rep.distribution) distribution.push_back({{"value", value}, {"count", count}});

  nlohmann::json comparisons = nlohmann::json::array();
  for (const auto& c : rep.comparisons) {
    comparisons.push_back({{"quantity", c.quantity},
                           {"analytic", json_number(c.analytic)},
                           {"empirical", json_number(c.empirical)},
                           {"std_error", json_number(c.std_error)},
                           {"z", c.z ? json_number(*c.z) : nlohmann::json()}});
  }

  nlohmann::json out = {
      {"schema_version", kReportSchemaVersion},
      {"config", config_json(rep.config)},
      {"columns", rep.columns},
      {"aggregate",
       {{"completed", rep.completed},
        {"timed_out", rep.timed_out},
        {"quantity", rep.columns.empty() ? "" : rep.columns.front()},
        {"distribution", distribution},
        {"mean", json_number(rep.mean)},
        {"variance", json_number(rep.variance)}}},
      {"comparisons", comparisons},
      {"window", nullptr},
      {"violations", rep.violations},
      {"overlap", nullptr},
      {"records", records},
      {"total_micros", rep.total_micros},
  };
  if (rep.window_low) {
    out["window"] = {{"low", *rep.window_low},
                     {"high", *rep.window_low + 1},
                     {"mass", rep.window_mass ? json_number(*rep.window_mass) : nlohmann::json()}};
  }
  if (rep.overlap) {
    const OverlapEstimate& o = *rep.overlap;
    out["overlap"] = {{"p", json_number(o.p)},
                      {"p_prime", json_number(o.p_prime)},
                      {"a", o.a},
                      {"prob_at_most", json_number(o.prob_at_most)},
                      {"prob_at_least", json_number(o.prob_at_least)},
                      {"wilson_at_most", interval_json(o.ci_at_most)},
                      {"wilson_at_least", interval_json(o.ci_at_least)},
                      {"both_exceed_twentieth", o.both_exceed_twentieth}};
  }
  return out;
}

void write_csv(std::ostream& out, const ExperimentReport& rep) {
  out << "# schema_version=" << kReportSchemaVersion << " mode=" << mode_name(rep.config.mode)
      << " rng=" << kRngVersion << '\n';
  out << "trial_index,seed,status";
  for (const auto& c : rep.columns) out << ',' << c;
  out << ",micros\n";
  for (const auto& rec : rep.records) {
    out << rec.trial_index << ',' << rec.seed << ',' << (rec.timed_out ? "timeout" : "ok");
    for (std::size_t c = 0; c < rep.columns.size(); ++c) {
      out << ',';
      if (!rec.timed_out) out << rec.values.at(c);
    }
    out << ',' << rec.micros << '\n';
  }
}

}  // namespace hyperalpha
