#include "hyperalpha/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

#include "hyperalpha/combinatorics.hpp"
#include "hyperalpha/error.hpp"
#include "hyperalpha/json_util.hpp"

namespace hyperalpha::analytics {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// count * log_value with 0 * (-inf) taken as 0.
double scaled_log(double count, double log_value) { return count == 0.0 ? 0.0 : count * log_value; }

double log_factorial(double x) { return std::lgamma(x + 1.0); }

double factorial(unsigned k) { return std::exp(log_factorial(k)); }

// (j+1)(j-1)!(k-1)(k-1-j)!
double ks_constant(unsigned k, unsigned j) {
  return (j + 1.0) * factorial(j - 1) * (k - 1.0) * factorial(k - 1 - j);
}

// Probability that Binomial(trials, p) is at least 2.
double binomial_tail_two(double trials, double p) {
  if (trials < 2 || p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double log1m = std::log1p(-p);
  const double mean = trials * p;
  if (mean < 1.0) {
    // Sum the tail directly; 1 - P0 - P1 cancels catastrophically here.
    double log_term = std::log(trials * (trials - 1) / 2) + 2 * std::log(p) + (trials - 2) * log1m;
    double term = std::exp(log_term);
    double sum = 0.0;
    for (double i = 2; i <= trials && term > sum * 1e-18; ++i) {
      sum += term;
      term *= (trials - i) / (i + 1) * p / (1 - p);
    }
    return std::min(sum, 1.0);
  }
  const double head = std::exp(trials * log1m) + std::exp(std::log(trials) + std::log(p) + (trials - 1) * log1m);
  return std::clamp(1.0 - head, 0.0, 1.0);
}

double log_binomial_tail_two(double trials, double p) {
  if (trials < 2 || p <= 0.0) return kNegInf;
  if (p >= 1.0) return 0.0;
  const double mean = trials * p;
  if (mean < 1.0) return std::log(binomial_tail_two(trials, p));
  const double log1m = std::log1p(-p);
  const double head = std::exp(trials * log1m) + std::exp(std::log(trials) + std::log(p) + (trials - 1) * log1m);
  return head >= 1.0 ? kNegInf : std::log1p(-head);
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
}

void check_augmented_domain(unsigned n, unsigned k, unsigned s, unsigned r) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (static_cast<unsigned long long>(r) * (k - 1) > s)
    throw DomainError("r = " + std::to_string(r) + " exceeds s/(k-1) for s = " + std::to_string(s));
  if (s + r > n) throw DomainError("s + r exceeds n");
}

// n^(k/2), exact for integer results.
double half_power(unsigned n, unsigned k) {
  double v = std::pow(static_cast<double>(n), k / 2);
  if (k % 2 == 1) v *= std::sqrt(static_cast<double>(n));
  return v;
}

}  // namespace

double f_poly(double x, unsigned k) {
  if (k < 2) throw DomainError("f_poly needs k >= 2");
  double v = 1.0;
  for (unsigned i = 0; i + 1 < k; ++i) v *= x - i;
  return v;
}

double f_inverse(double y, unsigned k) {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("f_inverse needs a finite y > 0");
  if (k < 2) throw DomainError("f_inverse needs k >= 2");
  // f(k - 2) = 0 < y <= f(hi).
  double lo = k - 2.0;
  double hi = std::max<double>(k, 2.0 * std::pow(y, 1.0 / (k - 1)) + k);
  while (f_poly(hi, k) < y) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (f_poly(mid, k) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = (std::abs(f_poly(lo, k) - y) <= std::abs(f_poly(hi, k) - y)) ? lo : hi;
  if (std::abs(f_poly(x, k) - y) > 1e-9 * std::max(1.0, y))
    throw DomainError("f_inverse did not converge");
  return x;
}

double log_expected_independent(unsigned n, unsigned k, double p, unsigned s) {
  check_p(p);
  if (s > n) return kNegInf;
  return log_binomial(n, s) + scaled_log(binomial_real(s, k), std::log1p(-p));
}

double f_value(unsigned k, double p, unsigned t) {
  check_p(p);
  return binomial_tail_two(binomial_real(t, k - 1), p);
}

double log_f_value(unsigned k, double p, unsigned t) {
  check_p(p);
  return log_binomial_tail_two(binomial_real(t, k - 1), p);
}

double log_expected_augmented(unsigned n, unsigned k, double p, unsigned s, unsigned r) {
  check_p(p);
  check_augmented_domain(n, k, s, r);
  const unsigned t = s + r;
  // Number of ways to place r disjoint k-edges inside a t-set.
  const double log_matchings = log_factorial(t) - log_factorial(s - (k - 1.0) * r) -
                               r * log_factorial(k) - log_factorial(r);
  return log_binomial(n, t) + log_matchings + scaled_log(r, std::log(p)) +
         scaled_log(binomial_real(t, k) - r, std::log1p(-p)) + scaled_log(n - t, log_f_value(k, p, t));
}

double log_expected_maximal(unsigned n, unsigned k, double p, unsigned s) {
  check_p(p);
  if (s > n) return kNegInf;
  const double inside = binomial_real(s, k - 1);
  // Probability that an outside vertex has an edge into S: 1 - (1-p)^C(s,k-1).
  const double log_hit = p == 1.0 ? (inside > 0 ? 0.0 : kNegInf) : std::log(-std::expm1(inside * std::log1p(-p)));
  return log_expected_independent(n, k, p, s) + scaled_log(n - s, log_hit);
}

AnalyticContext::AnalyticContext(unsigned n, unsigned k, double p, double epsilon)
    : n_(n), k_(k), p_(p), epsilon_(epsilon) {
  if (k < 2 || k > n) throw DomainError("need 2 <= k <= n");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  d_ = n * std::pow(p, 1.0 / (k - 1));
  log_d_ = std::log(d_);
  log_n_ = std::log(static_cast<double>(n));
  log1m_p_ = std::log1p(-p);
  log_choose_n_.resize(n + 1);
  log_choose_n_[0] = 0.0;
  for (unsigned s = 1; s <= n; ++s)
    log_choose_n_[s] = log_choose_n_[s - 1] + std::log(static_cast<double>(n - s + 1)) - std::log(static_cast<double>(s));
}

unsigned AnalyticContext::max_r(unsigned s) const {
  if (s > n_) return 0;
  return std::min(s / (k_ - 1), n_ - s);
}

double AnalyticContext::log_expected_Xs(unsigned s) const {
  if (s > n_) return kNegInf;
  return log_choose_n(s) + scaled_log(binomial_real(s, k_), log1m_p_);
}

double AnalyticContext::F_value(unsigned s, unsigned r) const { return f_value(k_, p_, s + r); }

double AnalyticContext::log_F(unsigned s, unsigned r) const { return log_f_value(k_, p_, s + r); }

double AnalyticContext::log_E(unsigned s, unsigned r) const {
  check_augmented_domain(n_, k_, s, r);
  const unsigned t = s + r;
  const double log_matchings = log_factorial(t) - log_factorial(s - (k_ - 1.0) * r) -
                               r * log_factorial(k_) - log_factorial(r);
  return log_choose_n(t) + log_matchings + r * std::log(p_) + (binomial_real(t, k_) - r) * log1m_p_ +
         scaled_log(n_ - t, log_F(s, r));
}

double AnalyticContext::log_expected_Y(unsigned s) const { return log_expected_maximal(n_, k_, p_, s); }

SxResult compute_sx(const AnalyticContext& ctx) {
  const double cutoff = 2 * ctx.epsilon() * ctx.log_n();
  std::optional<unsigned> best;
  double prev = kNegInf;
  // ln E[X_s] is concave in s: once it falls below the cutoff while
  // decreasing it never comes back.
  for (unsigned s = 0; s <= ctx.n(); ++s) {
    const double v = ctx.log_expected_Xs(s);
    if (v > cutoff) {
      best = s;
    } else if (best && v < prev) {
      break;
    }
    prev = v;
  }
  if (!best) throw DomainError("no s has E[X_s] above n^(2 epsilon)");
  SxResult out;
  out.s_x = *best;
  out.log_EX = ctx.log_expected_Xs(out.s_x);
  out.log_EX_plus2 = ctx.log_expected_Xs(out.s_x + 2);
  out.side_condition = out.log_EX_plus2 < 0.0;
  return out;
}

RmResult compute_rM(const AnalyticContext& ctx, unsigned s) {
  if (s > ctx.n()) throw DomainError("s exceeds n");
  RmResult out;
  out.log_E_max = kNegInf;
  for (unsigned r = 0; r <= ctx.max_r(s); ++r) {
    const double v = ctx.log_E(s, r);
    if (v > out.log_E_max) {
      out.log_E_max = v;
      out.r_M = r;
    }
  }
  const unsigned k = ctx.k();
  out.predictor_raw = std::exp((2.0 * k - 1) * std::log(static_cast<double>(s)) + std::log(ctx.p()) -
                               log_factorial(k) - k - (k - 1.0) * ctx.log_n()) -
                      1.0;
  out.predictor = std::max(0LL, static_cast<long long>(std::ceil(out.predictor_raw)));
  return out;
}

SzResult compute_sz(const AnalyticContext& ctx) {
  const unsigned s_x = compute_sx(ctx).s_x;
  const double cutoff = ctx.epsilon() * ctx.log_n();
  for (unsigned s = s_x + 1; s-- > 0;) {
    const RmResult rm = compute_rM(ctx, s);
    if (rm.log_E_max > cutoff) return {s, rm.r_M, rm.log_E_max};
  }
  throw DomainError("no s <= s_x has E(n,k,s,r) above n^epsilon");
}

double ks_alpha_j(unsigned n, unsigned k, unsigned j, double p) {
  if (j < 1 || j + 1 > k) throw DomainError("need 1 <= j <= k - 1");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  const double log_d = std::log(n * std::pow(p, 1.0 / (k - 1)));
  if (!(log_d > 0.0)) throw DomainError("d = n p^(1/(k-1)) must exceed 1");
  return std::pow(static_cast<double>(n), 1.0 - (k - 1.0) / j) * std::pow(ks_constant(k, j) * log_d / p, 1.0 / j);
}

double ks_alpha_weak(unsigned n, unsigned k, double p) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  const double log_d = std::log(n * std::pow(p, 1.0 / (k - 1)));
  if (!(log_d > 0.0)) throw DomainError("d = n p^(1/(k-1)) must exceed 1");
  return std::pow(factorial(k) * log_d / p, 1.0 / (k - 1));
}

PredictionReport predict(const AnalyticContext& ctx, RegimeBand band) {
  const unsigned n = ctx.n();
  const unsigned k = ctx.k();
  const double p = ctx.p();
  const double e_k = std::exp(static_cast<double>(k));

  PredictionReport rep;
  rep.n = n;
  rep.k = k;
  rep.p = p;
  rep.epsilon = ctx.epsilon();
  rep.d = ctx.d();

  const SxResult sx = compute_sx(ctx);
  const SzResult sz = compute_sz(ctx);
  rep.s_x = sx.s_x;
  rep.s_z = sz.s_z;
  rep.r_z = sz.r_z;
  rep.window_low = sz.s_z;
  rep.window_high = sz.s_z + 1;
  rep.observed_gap = sx.s_x - sz.s_z;
  rep.log_EXsx = sx.log_EX;
  rep.log_EXsx_plus2 = sx.log_EX_plus2;
  rep.side_condition = sx.side_condition;
  rep.r_z_predictor = compute_rM(ctx, sz.s_z).predictor;

  GapRegime& g = rep.gap_regime;
  const double threshold = ctx.log_n() * std::pow(static_cast<double>(n), -std::pow(k - 1.0, 2) / k);
  g.ratio = p / threshold;
  const double power = k / (k - 1.0);
  if (g.ratio > band.high) {
    g.label = "dense";
    g.predicted_gap = 0;
  } else if (g.ratio >= band.low) {
    g.label = "critical";
    const double base = std::pow(factorial(k - 1), power) / (std::pow(g.ratio, power) * e_k);
    g.xi_low = base - power - 0.5;
    g.xi_high = base + 1.5;
    g.xi_raw = base - k * sx.log_EX / ((k - 1.0) * ctx.log_n()) + power * ctx.epsilon();
    g.predicted_gap = std::ceil(*g.xi_raw);
  } else {
    g.label = "sparse";
    g.predicted_gap = std::pow(factorial(k) * ctx.log_d(), power) /
                      (e_k * std::pow(p, power) * std::pow(static_cast<double>(n), k - 1.0));
  }

  rep.asymptotic_domain = ctx.d() > 1.0;
  if (rep.asymptotic_domain) {
    // The vanishing correction inside the bracket is taken as 0.
    const double bracket = ctx.log_d() - std::log(ctx.log_d()) / (k - 1) + 1.0 - log_factorial(k) / (k - 1);
    const double arg = factorial(k) * bracket / p;
    if (arg > 0) rep.asymptotic_alpha = f_inverse(arg, k);
    rep.ks_alpha = ks_alpha_j(n, k, k - 1, p);
  }
  return rep;
}

AntiConcentrationSchedule anti_schedule(unsigned n, unsigned k, unsigned j, double p, double slack) {
  if (k < 2 || k > n) throw DomainError("need 2 <= k <= n");
  if (j < 1 || j + 1 > k) throw DomainError("need 1 <= j <= k - 1");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");

  AntiConcentrationSchedule out;
  out.n = n;
  out.k = k;
  out.j = j;
  out.p = p;
  out.slack = slack;
  const double nk2 = half_power(n, k);
  const double sqrt_p = std::sqrt(p);
  out.p_prime = p + sqrt_p / nk2;
  out.z_bound = nk2 * sqrt_p;

  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  const double log_d = std::log(nd * std::pow(p, 1.0 / (k - 1)));
  const double kf = factorial(k);
  if (log_d > 0) {
    out.ell = std::pow(p, -0.5 - 1.0 / (k - 1)) * std::pow(kf * log_d, 1.0 / (k - 1)) / (3.0 * nk2);
    const double lead = 1.0 - std::pow(2.0, -1.0 / j) - slack;
    out.ell_general = std::max(0.0, lead * std::pow(nd, 1.0 - k / 2.0 - (k - 1.0) / j) *
                                        std::pow(p, -0.5 - 1.0 / j) *
                                        std::pow(ks_constant(k, j) * log_d, 1.0 / j));
  }

  const double lower = std::pow(nd, -(k - 1.0));
  out.band_upper = std::pow(std::pow(kf * log_n, 1.0 / (k - 1)) / (6.0 * std::pow(k + 1.0, 1.0 / (k - 1)) * nk2),
                            2.0 * (k - 1) / (k + 1));
  const double lead = 1.0 - std::pow(2.0, -1.0 / j) - slack;
  out.band_upper_general = std::pow(std::max(0.0, lead) * std::pow(nd, 1.0 - k / 2.0 - (k - 1.0) / j) / 2,
                                    2.0 * j / (j + 2.0)) *
                           std::pow(ks_constant(k, j) * log_n / (k + 1.0), 2.0 / (j + 2.0));
  out.in_band = p > lower && p < out.band_upper;
  out.in_band_general = p > lower && p < out.band_upper_general;
  if (!out.in_band_general)
    spdlog::warn("p = {} lies outside the anti-concentration range ({}, {}) for n={}, k={}, j={}", p, lower,
                 out.band_upper_general, n, k, j);
  return out;
}

namespace {

// f(t) = t (t-1) ... (t-k+2) exactly.
u128 falling(std::uint64_t t, unsigned k) {
  u128 v = 1;
  for (unsigned i = 0; i + 1 < k; ++i) {
    if (t < i) return 0;
    if (__builtin_mul_overflow(v, static_cast<u128>(t - i), &v)) throw CapacityError("f(t) overflows 128 bits");
  }
  return v;
}

u128 factorial128(unsigned m) {
  u128 v = 1;
  for (unsigned i = 2; i <= m; ++i) v *= i;
  return v;
}

}  // namespace

bool check_binom_identity(std::uint64_t t, unsigned k) {
  if (k < 2 || t < k) throw DomainError("identity needs k >= 2 and t >= k");
  const u128 lhs = binomial128(t + 1, k) - binomial128(t, k);
  const u128 num = falling(t, k);
  const u128 den = factorial128(k - 1);
  return num % den == 0 && lhs == num / den;
}

bool check_growth_bound(std::uint64_t t, std::uint64_t r, unsigned k, double delta) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (r > t) throw DomainError("growth bound needs t >= r");
  const long double ft = static_cast<long double>(falling(t, k));
  if (static_cast<long double>(falling(r, k)) < (1.0L - delta) * ft)
    throw DomainError("growth bound needs f(r) >= (1 - delta) f(t)");
  const long double lhs = static_cast<long double>(binomial128(t, k) - binomial128(r, k));
  const long double rhs = static_cast<long double>(t - r) * (1.0L - (1.0L + 1.0L / k) * delta) *
                          static_cast<long double>(falling(t == 0 ? 0 : t - 1, k)) /
                          static_cast<long double>(factorial128(k - 1));
  return lhs >= rhs;
}

GrowthBoundSweep sweep_growth_bound(unsigned k, double delta, std::uint64_t t_max) {
  GrowthBoundSweep out;
  out.k = k;
  out.delta = delta;
  out.t_max = t_max;
  std::uint64_t r = 0;
  for (std::uint64_t t = k; t <= t_max; ++t) {
    const long double target = (1.0L - delta) * static_cast<long double>(falling(t, k));
    // The smallest admissible r is nondecreasing in t.
    while (static_cast<long double>(falling(r, k)) < target) ++r;
    if (check_growth_bound(t, r, k, delta)) {
      if (!out.first_hold) out.first_hold = t;
    } else {
      out.last_violation = t;
      ++out.violations;
    }
  }
  out.onset = out.last_violation ? *out.last_violation + 1 : k;
  return out;
}

nlohmann::json to_json(const PredictionReport& r) {
  nlohmann::json regime = {
      {"label", r.gap_regime.label},
      {"ratio", json_number(r.gap_regime.ratio)},
      {"predicted_gap", json_number(r.gap_regime.predicted_gap)},
  };
  if (r.gap_regime.xi_low) {
    regime["xi_low"] = json_number(*r.gap_regime.xi_low);
    regime["xi_high"] = json_number(*r.gap_regime.xi_high);
    regime["xi_raw"] = json_number(*r.gap_regime.xi_raw);
  }
  auto optional_number = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? json_number(*v) : nlohmann::json(nullptr);
  };
  return {
      {"n", r.n},
      {"k", r.k},
      {"p", json_number(r.p)},
      {"epsilon", json_number(r.epsilon)},
      {"d", json_number(r.d)},
      {"s_x", r.s_x},
      {"s_z", r.s_z},
      {"r_z", r.r_z},
      {"window", {r.window_low, r.window_high}},
      {"observed_gap", r.observed_gap},
      {"gap_regime", regime},
      {"log_EXsx", json_number(r.log_EXsx)},
      {"log_EXsx_plus2", json_number(r.log_EXsx_plus2)},
      {"side_condition", r.side_condition},
      {"r_z_predictor", r.r_z_predictor},
      {"asymptotic_domain", r.asymptotic_domain},
      {"asymptotic_alpha", optional_number(r.asymptotic_alpha)},
      {"ks_alpha", optional_number(r.ks_alpha)},
  };
}

nlohmann::json to_json(const AntiConcentrationSchedule& s) {
  return {
      {"n", s.n},
      {"k", s.k},
      {"j", s.j},
      {"p", json_number(s.p)},
      {"slack", json_number(s.slack)},
      {"p_prime", json_number(s.p_prime)},
      {"z_bound", json_number(s.z_bound)},
      {"ell", json_number(s.ell)},
      {"ell_general", json_number(s.ell_general)},
      {"in_band", s.in_band},
      {"in_band_general", s.in_band_general},
      {"band_upper", json_number(s.band_upper)},
      {"band_upper_general", json_number(s.band_upper_general)},
  };
}

}  // namespace hyperalpha::analytics
