#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hyperalpha/analytics.hpp"
#include "hyperalpha/augmented.hpp"
#include "hyperalpha/error.hpp"
#include "hyperalpha/experiments.hpp"
#include "hyperalpha/hypergraph.hpp"
#include "hyperalpha/logging.hpp"
#include "hyperalpha/solver.hpp"

namespace hyperalpha::cli {
namespace {

struct Options {
  unsigned n = 0;
  unsigned k = 0;
  double p = 0;
  std::optional<unsigned> j;
  std::optional<unsigned> s;
  std::optional<unsigned> r;
  double epsilon = analytics::AnalyticContext::kDefaultEpsilon;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  unsigned parallelism = 1;
  double timeout_secs = 60;
  std::string in;
  std::string out;
  std::string format = "json";
  std::string mode;
  std::optional<double> p2;
  bool exhaustive = false;
};

class GatedViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to --out when given, else to the stream passed to run_cli.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw DomainError("cannot open '" + path + "' for writing");
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

Hypergraph load(const std::string& path) {
  if (path.empty() || path == "-") return read_hypergraph(std::cin);
  return read_hypergraph_file(path);
}

// Top-level scalars as key,value rows.
void write_flat_csv(std::ostream& out, const nlohmann::json& j, const std::string& prefix = "") {
  if (prefix.empty()) out << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      write_flat_csv(out, *it, key);
    } else if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i) out << key << '.' << i << ',' << (*it)[i].dump() << '\n';
    } else {
      out << key << ',' << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
  }
}

void emit(const Options& o, std::ostream& fallback, const nlohmann::json& j) {
  Sink sink(o.out, fallback);
  if (o.format == "csv") {
    write_flat_csv(*sink, j);
  } else {
    *sink << j.dump(2) << '\n';
  }
}

void cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelParams params{o.n, o.k, o.p, o.seed};
  const Hypergraph h = sample_hnkp(params);
  Sink sink(o.out, out);
  write_hypergraph(*sink, h);
  err << "generated H(" << o.n << ", " << o.k << ", " << o.p << ") with " << h.edge_count() << " edges\n";
}

void cmd_alpha(const Options& o, std::ostream& out, std::ostream& err) {
  const Hypergraph h = load(o.in);
  const unsigned j = o.j.value_or(h.k() - 1);
  SolverOptions opts;
  opts.deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(o.timeout_secs));
  const AlphaResult res = solve_alpha(h, j, opts);
  Sink sink(o.out, out);
  if (o.format == "csv") {
    *sink << "j,alpha\n" << j << ',' << res.alpha << '\n';
  } else {
    *sink << res.alpha << '\n';
  }
  err << "alpha_" << j << " = " << res.alpha << ", witness {";
  for (std::size_t i = 0; i < res.witness.size(); ++i) err << (i ? " " : "") << res.witness[i];
  err << "}, " << res.nodes << " nodes\n";
}

void cmd_augmented(const Options& o, std::ostream& out, std::ostream& err) {
  const Hypergraph h = load(o.in);
  nlohmann::json j;
  if (o.s) {
    nlohmann::json sets = nlohmann::json::array();
    for (const AugmentedSet& a : enumerate_augmented(h, *o.s))
      sets.push_back({{"vertices", a.vertices}, {"matching", a.matching}, {"r", a.r}});
    err << sets.size() << " augmented sets of order " << *o.s << '\n';
    j = {{"s", *o.s}, {"count", sets.size()}, {"sets", sets}};
  } else {
    const unsigned value = hat_alpha(h);
    err << "largest augmented order " << value << '\n';
    j = {{"hat_alpha", value}};
  }
  emit(o, out, j);
}

void cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
  const auto report = analytics::predict(analytics::AnalyticContext(o.n, o.k, o.p, o.epsilon));
  err << "s_x = " << report.s_x << ", s_z = " << report.s_z << ", r_z = " << report.r_z << ", regime "
      << report.gap_regime.label << '\n';
  emit(o, out, analytics::to_json(report));
}

void cmd_schedule(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.k < 2) throw DomainError("k must be at least 2");
  const auto sched = analytics::anti_schedule(o.n, o.k, o.j.value_or(o.k - 1), o.p);
  err << "p' = " << sched.p_prime << ", window " << sched.ell_general << '\n';
  emit(o, out, analytics::to_json(sched));
}

void cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.model = {o.n, o.k, o.p, o.seed};
  cfg.mode = parse_mode(o.mode);
  cfg.j = o.j;
  cfg.trials = o.trials;
  cfg.s = o.s;
  cfg.r = o.r;
  cfg.p2 = o.p2;
  cfg.epsilon = o.epsilon;
  cfg.parallelism = o.parallelism;
  cfg.timeout_secs = o.timeout_secs;
  cfg.exhaustive = o.exhaustive;
  const ExperimentReport rep = run_experiment(cfg);
  {
    Sink sink(o.out, out);
    if (o.format == "csv") {
      write_csv(*sink, rep);
    } else {
      *sink << to_json(rep).dump(2) << '\n';
    }
  }
  err << mode_name(cfg.mode) << ": " << rep.completed << " trials completed, " << rep.timed_out << " timed out, mean "
      << rep.columns.front() << " " << rep.mean;
  if (rep.window_mass) err << ", window mass " << *rep.window_mass;
  err << ", " << rep.violations << " violations\n";
  if (rep.violations > 0 && (cfg.mode == ExperimentMode::kAugmentedFuzz || cfg.mode == ExperimentMode::kCoupling))
    throw GatedViolation(std::to_string(rep.violations) + " gated violations");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();
  Options o;
  CLI::App app{"Independence numbers of random uniform hypergraphs"};
  app.name("hyperalpha");
  app.require_subcommand(1);

  auto model_flags = [&](CLI::App* sub, bool required) {
    sub->add_option("--n", o.n, "number of vertices")->required(required);
    sub->add_option("--k", o.k, "edge size")->required(required);
    sub->add_option("--p", o.p, "edge probability")->required(required);
  };
  const auto formats = CLI::IsMember({"json", "csv"});

  auto* gen = app.add_subcommand("gen", "sample H(n, k, p) and write it in the text format");
  model_flags(gen, true);
  gen->add_option("--seed", o.seed);
  gen->add_option("--out", o.out, "output file (default stdout)");

  auto* alpha = app.add_subcommand("alpha", "exact j-independence number of a hypergraph file");
  alpha->add_option("--in", o.in, "input file, - for stdin")->required();
  alpha->add_option("--j", o.j, "independence level (default k-1)");
  alpha->add_option("--timeout-secs", o.timeout_secs);
  alpha->add_option("--out", o.out);
  alpha->add_option("--format", o.format)->check(formats);

  auto* augmented = app.add_subcommand("augmented", "augmented independent sets of a hypergraph file");
  augmented->add_option("--in", o.in, "input file, - for stdin")->required();
  augmented->add_option("--s", o.s, "list the sets of this order instead of the largest order");
  augmented->add_option("--out", o.out);
  augmented->add_option("--format", o.format)->check(formats);

  auto* predict = app.add_subcommand("predict", "analytic thresholds and the predicted window");
  model_flags(predict, true);
  predict->add_option("--epsilon", o.epsilon);
  predict->add_option("--out", o.out);
  predict->add_option("--format", o.format)->check(formats);

  auto* schedule = app.add_subcommand("schedule", "anti-concentration schedule p', z and window lengths");
  model_flags(schedule, true);
  schedule->add_option("--j", o.j);
  schedule->add_option("--out", o.out);
  schedule->add_option("--format", o.format)->check(formats);

  auto* experiment = app.add_subcommand("experiment", "seeded Monte Carlo experiments");
  model_flags(experiment, true);
  experiment->add_option("--mode", o.mode)
      ->required()
      ->check(CLI::IsMember({"concentration", "lemma1", "expectation", "coupling"}));
  experiment->add_option("--j", o.j);
  experiment->add_option("--s", o.s);
  experiment->add_option("--r", o.r);
  experiment->add_option("--p2", o.p2, "denser probability for coupling");
  experiment->add_option("--epsilon", o.epsilon);
  auto* seed = experiment->add_option("--seed", o.seed);
  auto* trials = experiment->add_option("--trials", o.trials);
  experiment->add_option("--parallelism", o.parallelism);
  experiment->add_option("--timeout-secs", o.timeout_secs);
  auto* exhaustive = experiment->add_flag("--exhaustive", o.exhaustive, "lemma1: every hypergraph on n vertices");
  exhaustive->excludes(seed)->excludes(trials);
  experiment->add_option("--out", o.out);
  experiment->add_option("--format", o.format)->check(formats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) cmd_gen(o, out, err);
    if (*alpha) cmd_alpha(o, out, err);
    if (*augmented) cmd_augmented(o, out, err);
    if (*predict) cmd_predict(o, out, err);
    if (*schedule) cmd_schedule(o, out, err);
    if (*experiment) cmd_experiment(o, out, err);
  } catch (const GatedViolation& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kOk;
}

}  // namespace hyperalpha::cli
