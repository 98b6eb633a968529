#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "kirchhoff/dynamics.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/spectrum.hpp"
#include "kirchhoff/weight.hpp"

namespace kirchhoff {

/// Amplitude and coefficient bounds around a reference solution.
struct ConstantsBundle {
  double nu0 = 1.0;
  double H0 = 0.0;
  double R0 = 0.0;  ///< amplitude bound, R0^2 >= 2 H0 / nu0
  double C0 = 0.0;  ///< max m on [0, R0^2]
  double L0 = 0.0;  ///< max |m'| on [0, R0^2]
  double R1 = 0.0;  ///< bound on max{|A^{1/4}u'|, |A^{3/4}u|}
  std::optional<double> R2;         ///< bound on |A^{5/4}u|
  std::optional<double> R2_lambda;  ///< bound on |A^{5/4}u| restricted to lambda_k <= lambda
  std::optional<double> lambda;

  friend bool operator==(const ConstantsBundle&, const ConstantsBundle&) = default;
};

/// Sampled maxima are multiplied by this before use so strict inequalities
/// survive sampling error.
inline constexpr double kSampleInflation = 1.01;

/// Bundle around a reference trajectory. H0 comes from the initial state with
/// R0 = sqrt(2 H0 / nu0); R1, R2 and R2_lambda are sampled maxima inflated by 1%.
[[nodiscard]] ConstantsBundle build_constants(const Spectrum& spec, const Nonlinearity& nl,
                                              const Trajectory& base,
                                              std::optional<double> lambda = std::nullopt);

/// Bundle valid for the pair (u, v) on their common samples: R0 bounds
/// |A^{1/2}| of both, R1 bounds u and half of v, R2 and R2_lambda come from u.
[[nodiscard]] ConstantsBundle build_pair_constants(const Spectrum& spec, const Nonlinearity& nl,
                                                   const Trajectory& u, const Trajectory& v,
                                                   std::optional<double> lambda = std::nullopt);

/// Bundle with R0 = R1 = R2 = amplitude around the null solution.
[[nodiscard]] ConstantsBundle null_solution_constants(const Nonlinearity& nl, double amplitude);

enum class GammaCase { Regular, Minimal };

std::string_view to_string(GammaCase c) noexcept;

struct GammaSet {
  std::optional<double> gamma1;
  std::optional<double> gamma2;
  std::optional<double> gamma1_lambda;
  std::optional<double> gamma2_lambda;
  std::optional<double> gamma3;
  std::optional<double> gamma4;

  friend bool operator==(const GammaSet&, const GammaSet&) = default;
};

/// Evaluates every growth constant the bundle allows. When `required` is
/// given, a missing ingredient for that case raises MissingField.
[[nodiscard]] GammaSet gammas(const ConstantsBundle& cb,
                              std::optional<GammaCase> required = std::nullopt);

/// E0 * G1 * exp(G2 * T) in the regular case, E0 * {G1l e^{G2l T} + 2 G3 e^{G4 T}}
/// in the minimal case.
[[nodiscard]] double smallness_lhs(const GammaSet& gs, double E0, double T, GammaCase c);
/// E_u^{lambda,+}(0) * G3 * exp(G4 * T)
[[nodiscard]] double high_frequency_lhs(const GammaSet& gs, double Eu_high, double T);

/// Supremum of the times T for which the smallness hypothesis holds. The
/// regular case is solved in closed form (+inf when G2 = 0); the minimal case
/// takes the smaller of the roots of its two hypotheses.
[[nodiscard]] double guaranteed_time(const GammaSet& gs, double E0, double R1, GammaCase c,
                                     std::optional<double> Eu_high = std::nullopt);

enum class LifespanCase { FiniteDimensional, Analytic, QuasiAnalytic, NullSolution };

std::string_view to_string(LifespanCase c) noexcept;

struct LifespanEstimate {
  LifespanCase kind = LifespanCase::FiniteDimensional;
  double epsilon = 0.0;
  double lower_bound = 0.0;
  double rate = 0.0;
};

/// Largest epsilon for which the closed form is meaningful: 1, 1/e, e^{-e}, 1.
[[nodiscard]] double natural_epsilon_limit(LifespanCase c) noexcept;

/// |log e| / rate, log|log e| / rate, log log|log e| / rate or rate / e^2.
[[nodiscard]] LifespanEstimate lifespan_lower_bound(LifespanCase c, double epsilon, double rate,
                                                    std::optional<double> threshold = std::nullopt);

/// sup_{s >= 0} s^b exp(-phi(s) / 2), cached per builtin weight and b.
[[nodiscard]] double interpolation_constant(const Weight& w, double b);

struct InterpolationResult {
  double lhs = 0.0;    ///< sum a_k lambda_k^b
  double bound = 0.0;  ///< {K_b + [phi^{-1}(2 log(F / E))]^b} E
  double K_b = 0.0;
  double E = 0.0;
  double F = 0.0;  ///< sum a_k max{1, lambda_k} exp(phi(lambda_k))
  bool clamped = false;  ///< F < E, so log(F / E) was replaced by 0
  [[nodiscard]] bool holds(double rel_slack = 1e-9) const { return lhs <= bound * (1.0 + rel_slack); }
};

[[nodiscard]] InterpolationResult interpolate(std::span<const double> a,
                                              std::span<const double> lambdas, double b,
                                              const Weight& w);

}  // namespace kirchhoff
