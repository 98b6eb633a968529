#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kirchhoff/dynamics.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/weight.hpp"

namespace kirchhoff {

enum class EnvelopeFamily { Analytic, QuasiAnalytic };

std::string_view to_string(EnvelopeFamily f) noexcept;

/// Growth bound for the corrected phi-energy under the differential
/// inequality F' <= c0 F {1 + phi^{-1}(log(F / c1))}.
///
/// Analytic:        y' = c0 y {1 + log(y / c1) / r0},          F <= F0 exp(exp(beta t))
/// Quasi-analytic:  y' = c0 y {1 + c2 l log(2 + l)}, l = log(y / c1),
///                                                              F <= F0 exp(exp(exp(beta t)))
struct GrowthEnvelope {
  EnvelopeFamily family = EnvelopeFamily::Analytic;
  double c0 = 1.0;
  double c1 = 1.0;
  double param = 1.0;  ///< r0 for the analytic family, c2 for the quasi-analytic one
  double beta = 0.0;
  double F0 = 1.0;

  /// Builds the envelope and its exponent from the premise constants.
  static GrowthEnvelope analytic(double c0, double c1, double r0, double F0);
  static GrowthEnvelope quasi_analytic(double c0, double c1, double c2, double F0);

  /// Right-hand side of the comparison equation divided by y, as a function
  /// of z = log y. Both families are monotone in z.
  [[nodiscard]] double log_rate(double z) const;
  /// log of the closed-form envelope at t: log F0 + e^{bt} or log F0 + e^{e^{bt}}.
  [[nodiscard]] double log_envelope(double t) const;
  /// d/dt of log_envelope.
  [[nodiscard]] double log_envelope_rate(double t) const;
  /// Time after which log_envelope exceeds 1e300.
  [[nodiscard]] double overflow_horizon() const;
};

[[nodiscard]] double beta_analytic(double c0, double c1, double r0, double F0);
[[nodiscard]] double beta_quasi_analytic(double c0, double c1, double c2, double F0);

struct ComparisonSample {
  double t = 0.0;
  double log_y = 0.0;
  double rate = 0.0;  ///< d/dt log y
};

/// Solution of the comparison equation with y(0) = F0, integrated in log y.
struct ComparisonSolution {
  std::vector<ComparisonSample> samples;
  /// First time y exceeded 1e300, when that happened before t_end.
  std::optional<double> overflow_time;

  [[nodiscard]] double log_value(double t) const;
  [[nodiscard]] double value(double t) const;
};

[[nodiscard]] ComparisonSolution integrate_comparison(const GrowthEnvelope& env, double t_end,
                                                      double tol,
                                                      std::span<const double> sample_times = {});

struct EnvelopeCheck {
  std::vector<double> grid;
  std::vector<double> envelope_rate;  ///< d/dt log Y
  std::vector<double> required_rate;  ///< c0 {1 + ...} evaluated at Y
  double margin = 0.0;                ///< min over grid of envelope_rate - required_rate
  std::optional<double> first_failure;
  bool initial_datum_ok = false;  ///< Y(0) = F0 e, resp. F0 e^e
  double checked_until = 0.0;
  bool pass = false;
};

/// Checks that the closed-form envelope is a supersolution on [0, t_end]
/// (clipped at the overflow horizon), on a grid of n_grid log-spaced times
/// plus t = 0.
[[nodiscard]] EnvelopeCheck verify_supersolution(const GrowthEnvelope& env, double t_end,
                                                 std::size_t n_grid = 1000);

/// Calibrated premise constants along a pilot trajectory.
struct Calibration {
  double c0 = 0.0;
  double c1 = 0.0;
  double F0 = 0.0;
};

/// c1 = min(1, nu0 * E_0(0)) and c0 the smallest constant making
/// F' <= c0 F {1 + phi^{-1}(log(F / c1))} hold at every sample, with the
/// exact F' and 1% headroom.
[[nodiscard]] Calibration calibrate(const Trajectory& pilot, const Nonlinearity& nl,
                                    const Weight& w);

/// Envelope of the family matching the weight, with calibrated constants.
/// The quasi-analytic c2 is certified on [0, c2_range].
[[nodiscard]] GrowthEnvelope envelope_for(const Weight& w, const Calibration& cal,
                                          double c2_range = 1e6);

struct GrowthRow {
  double t = 0.0;
  double log_f_phi = 0.0;
  double log_envelope = 0.0;  ///< raw bound log F0 + e^{bt} (resp. triple)
  double alpha_quarter = 0.0;  ///< E_{1/4}(t)
  double alpha_three_quarters = 0.0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double max_log_ratio = 0.0;  ///< max_t log F_phi - log envelope
  /// Interpolation bound for E_alpha along the trajectory, alpha = 1/4, 3/4.
  bool alpha_bounds_hold = true;
  double worst_alpha_slack = 0.0;
  /// sup_t E_alpha(t) / shape(t), with shape e^{4 a b t} (analytic) or
  /// exp(exp(max{2, 4a} b t)) (quasi-analytic).
  double fitted_B_quarter = 0.0;
  double fitted_B_three_quarters = 0.0;
};

[[nodiscard]] GrowthReport envelope_vs_simulation(const Trajectory& traj, const Nonlinearity& nl,
                                                  const Weight& w, const GrowthEnvelope& env);

}  // namespace kirchhoff
