#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kirchhoff/comparison.hpp"
#include "kirchhoff/config.hpp"
#include "kirchhoff/experiments.hpp"

namespace kirchhoff {

/// Outcome of one randomized property suite.
struct SuiteRow {
  std::string name;
  std::string statement;  ///< the inequality being checked, in formula form
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = 0.0;  ///< largest lhs / rhs seen (or the suite's own worst-case measure)
  std::string detail;

  [[nodiscard]] bool pass() const { return cases > 0 && violations == 0; }
};

/// Every case draws from its own stream derived from (seed, suite, case), so
/// results do not depend on thread scheduling.
[[nodiscard]] std::uint64_t case_seed(std::uint64_t seed, std::uint64_t suite, std::uint64_t index);

/// Linear equation with random c(t) = a + b1 sin(w1 t) + b2 cos(w2 t) and
/// certified nu0, C0, Lambda0; checks the alpha-energy bound for alpha = 0, 1/4.
[[nodiscard]] SuiteRow suite_linear_energy(std::uint64_t seed, std::size_t cases, double tol);

/// Four-mode affine scenarios, eps in {1e-2, 1e-4}, [0, 20]. gamma2_scale
/// multiplies Gamma2 before the comparison (1 leaves the bound intact).
[[nodiscard]] SuiteRow suite_regular_wellposedness(std::uint64_t seed, std::size_t cases, double tol,
                                                   double gamma2_scale = 1.0);

/// 32 modes with decaying data, cutoffs 2 and 8; also checks that Gamma3 and
/// Gamma4 agree between the two cutoffs.
[[nodiscard]] SuiteRow suite_minimal_wellposedness(std::uint64_t seed, std::size_t cases, double tol);

[[nodiscard]] SuiteRow suite_interpolation(std::uint64_t seed, std::size_t cases);

/// Supersolution check plus comparison solution below the closed-form envelope.
[[nodiscard]] SuiteRow suite_envelope(std::uint64_t seed, std::size_t draws, EnvelopeFamily family,
                                      double c2_range = 1e6);

/// Small data around a base run: hypotheses, confinement below 2 R1 and
/// E_w(t) <= E_w(0) Gamma1 exp(Gamma2 t) up to the guaranteed time.
[[nodiscard]] SuiteRow suite_local_existence(std::uint64_t seed, std::size_t cases, double tol);

/// Regular smallness holds at 0.999 T and fails at 1.001 T.
[[nodiscard]] SuiteRow suite_guaranteed_time_tightness(std::uint64_t seed, std::size_t cases);

[[nodiscard]] std::vector<SuiteRow> run_suites(const VerifyConfig& vc, std::uint64_t seed, double tol,
                                               double c2_range = 1e6);

/// All suites with the configured counts; one row and one verdict per suite.
[[nodiscard]] ExperimentResult run_verify(const ScenarioConfig& cfg);

}  // namespace kirchhoff
