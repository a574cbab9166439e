#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hyperalpha::analytics {

// Closed-form quantities of H(n, k, p), evaluated in log space. All
// expectations here are exact at finite n; only the threshold predictors in
// PredictionReport are asymptotic.

/// x (x - 1) ... (x - k + 2): k - 1 descending factors.
double f_poly(double x, unsigned k);

/// Inverse of f_poly on the increasing branch x > k - 2, by bisection.
/// Throws DomainError for y <= 0.
double f_inverse(double y, unsigned k);

// Formula kernels over raw parameters; p may be 0 or 1 here.

/// ln( C(n, s) (1 - p)^C(s, k) ).
double log_expected_independent(unsigned n, unsigned k, double p, unsigned s);
/// P[Binomial(C(t, k - 1), p) >= 2] with t = s + r: the probability that a
/// vertex outside a (s + r)-set has at least two edges into it.
double f_value(unsigned k, double p, unsigned t);
double log_f_value(unsigned k, double p, unsigned t);
/// ln of the expected number of augmented sets of order s with r matching
/// edges. Throws DomainError unless r <= s / (k - 1) and s + r <= n.
double log_expected_augmented(unsigned n, unsigned k, double p, unsigned s, unsigned r);
/// ln( C(n, s) (1 - p)^C(s, k) (1 - (1 - p)^C(s, k - 1))^(n - s) ): the
/// expected number of maximal independent s-sets.
double log_expected_maximal(unsigned n, unsigned k, double p, unsigned s);

/// (n, k, p, epsilon) with derived d = n p^(1/(k-1)) and cached ln C(n, s).
class AnalyticContext {
 public:
  static constexpr double kDefaultEpsilon = 0.1;

  /// Throws DomainError unless 2 <= k <= n, 0 < p < 1, 0 < epsilon < 1.
  AnalyticContext(unsigned n, unsigned k, double p, double epsilon = kDefaultEpsilon);

  unsigned n() const { return n_; }
  unsigned k() const { return k_; }
  double p() const { return p_; }
  double epsilon() const { return epsilon_; }
  double d() const { return d_; }
  double log_d() const { return log_d_; }
  double log_n() const { return log_n_; }
  double log1m_p() const { return log1m_p_; }

  /// Cached ln C(n, s), built by a running sum; agrees with log-gamma.
  double log_choose_n(unsigned s) const { return log_choose_n_.at(s); }

  double log_expected_Xs(unsigned s) const;
  double F_value(unsigned s, unsigned r) const;
  double log_F(unsigned s, unsigned r) const;
  double log_E(unsigned s, unsigned r) const;
  double log_expected_Y(unsigned s) const;

  /// Largest feasible r for order s: min(floor(s / (k - 1)), n - s).
  unsigned max_r(unsigned s) const;

 private:
  unsigned n_;
  unsigned k_;
  double p_;
  double epsilon_;
  double d_;
  double log_d_;
  double log_n_;
  double log1m_p_;
  std::vector<double> log_choose_n_;
};

struct SxResult {
  unsigned s_x = 0;
  double log_EX = 0;         ///< ln E[X_{s_x}]
  double log_EX_plus2 = 0;   ///< ln E[X_{s_x + 2}] (-inf past n)
  bool side_condition = false;  ///< E[X_{s_x + 2}] < 1
};

/// Largest s with E[X_s] > n^(2 epsilon).
SxResult compute_sx(const AnalyticContext& ctx);

struct RmResult {
  unsigned r_M = 0;
  double log_E_max = 0;
  double predictor_raw = 0;    ///< s^(2k-1) p / (k! e^k n^(k-1)) - 1
  long long predictor = 0;     ///< ceil(predictor_raw), at least 0
};

/// argmax_r E(n, k, s, r) by full scan, ties to the smaller r.
RmResult compute_rM(const AnalyticContext& ctx, unsigned s);

struct SzResult {
  unsigned s_z = 0;
  unsigned r_z = 0;
  double log_E = 0;  ///< ln E(n, k, s_z, r_z)
};

/// Largest s <= s_x with max_r E(n, k, s, r) > n^epsilon, and r_z = r_M(s_z).
/// Throws DomainError when no such s exists.
SzResult compute_sz(const AnalyticContext& ctx);

struct RegimeBand {
  double low = 0.5;
  double high = 2.0;
};

struct GapRegime {
  std::string label;        ///< "dense", "critical" or "sparse"
  double ratio = 0;         ///< C = p / (ln n * n^(-(k-1)^2/k))
  double predicted_gap = 0; ///< 0, ceil(xi raw), or the sparse formula
  std::optional<double> xi_low;
  std::optional<double> xi_high;
  std::optional<double> xi_raw;  ///< without the vanishing correction
};

struct PredictionReport {
  unsigned n = 0;
  unsigned k = 0;
  double p = 0;
  double epsilon = 0;
  double d = 0;
  unsigned s_x = 0;
  unsigned s_z = 0;
  unsigned r_z = 0;
  unsigned window_low = 0;
  unsigned window_high = 0;
  unsigned observed_gap = 0;  ///< s_x - s_z
  GapRegime gap_regime;
  double log_EXsx = 0;
  double log_EXsx_plus2 = 0;
  bool side_condition = false;
  long long r_z_predictor = 0;
  bool asymptotic_domain = false;  ///< d > 1; otherwise the fields below are absent
  std::optional<double> asymptotic_alpha;
  std::optional<double> ks_alpha;
};

PredictionReport predict(const AnalyticContext& ctx, RegimeBand band = {});

/// Leading-order j-independence number:
/// n^(1 - (k-1)/j) ((j+1)(j-1)!(k-1)(k-1-j)! ln d / p)^(1/j).
/// Throws DomainError unless 1 <= j <= k - 1, 0 < p < 1 and d > 1.
double ks_alpha_j(unsigned n, unsigned k, unsigned j, double p);
/// The j = k - 1 case written directly: (k! ln d / p)^(1/(k-1)).
double ks_alpha_weak(unsigned n, unsigned k, double p);

struct AntiConcentrationSchedule {
  unsigned n = 0;
  unsigned k = 0;
  unsigned j = 0;
  double p = 0;
  double slack = 0;
  double p_prime = 0;   ///< p + n^(-k/2) sqrt(p)
  double z_bound = 0;   ///< n^(k/2) sqrt(p)
  double ell = 0;       ///< window length for weak independence
  double ell_general = 0;  ///< window length for level j, with the given slack
  bool in_band = false;          ///< p inside the weak-independence range
  bool in_band_general = false;  ///< p inside the level-j range
  double band_upper = 0;
  double band_upper_general = 0;
};

/// Throws DomainError unless 0 < p < 1 and 1 <= j <= k - 1. Out-of-band p
/// is reported (and logged), not rejected.
AntiConcentrationSchedule anti_schedule(unsigned n, unsigned k, unsigned j, double p, double slack = 0.1);

/// C(t+1, k) - C(t, k) == f(t) / (k-1)! in exact integer arithmetic.
/// Throws DomainError for t < k.
bool check_binom_identity(std::uint64_t t, unsigned k);

/// C(t, k) - C(r, k) >= (t - r)(1 - (1 + 1/k) delta) f(t - 1) / (k-1)!.
/// Throws DomainError unless t >= r and f(r) >= (1 - delta) f(t).
bool check_growth_bound(std::uint64_t t, std::uint64_t r, unsigned k, double delta);

struct GrowthBoundSweep {
  unsigned k = 0;
  double delta = 0;
  std::uint64_t t_max = 0;
  std::optional<std::uint64_t> first_hold;
  std::optional<std::uint64_t> last_violation;
  std::uint64_t onset = 0;  ///< all t in [onset, t_max] hold
  std::uint64_t violations = 0;
};

/// Runs check_growth_bound for t in [k, t_max] with r the smallest integer such
/// that f(r) >= (1 - delta) f(t).
GrowthBoundSweep sweep_growth_bound(unsigned k, double delta, std::uint64_t t_max);

nlohmann::json to_json(const PredictionReport& report);
nlohmann::json to_json(const AntiConcentrationSchedule& schedule);

}  // namespace hyperalpha::analytics
