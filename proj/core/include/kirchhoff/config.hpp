#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kirchhoff/bounds.hpp"
#include "kirchhoff/io.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/spectrum.hpp"
#include "kirchhoff/weight.hpp"

namespace kirchhoff {

enum class Experiment { Lsc, Age, Growth, Verify, Simulate };

std::string_view to_string(Experiment e) noexcept;
[[nodiscard]] Experiment parse_experiment(std::string_view s);

enum class SpectrumKind { Linear, SquareRoot, Lacunary, Explicit };

struct SpectrumConfig {
  SpectrumKind kind = SpectrumKind::Linear;
  std::size_t modes = 4;
  std::vector<double> values;  ///< only for explicit spectra
};

struct NonlinearityConfig {
  NonlinearityFamily kind = NonlinearityFamily::Affine;
  double nu0 = 1.0;
  double slope = 1.0;
};

struct WeightConfig {
  WeightFamily kind = WeightFamily::Zero;
  double r0 = 1.0;
};

struct PerturbationConfig {
  std::vector<double> d0;
  std::vector<double> d1;
  std::vector<double> epsilons;  ///< strictly decreasing, in (0, 1)
};

struct SolverConfig {
  double tol = 1e-9;
  double t_end = 20.0;
  std::size_t samples = 200;  ///< uniform output grid intervals on [0, t_end]
};

struct LscConfig {
  double zero_threshold = 1e-6;
  double bound_slack = 1e-3;
  double monotone_slack = 0.05;
};

struct AgeConfig {
  std::optional<LifespanCase> lifespan_case;  ///< inferred from the weight when absent
  std::optional<double> cutoff;               ///< selects the minimal-regularity hypotheses
  std::optional<double> amplitude;            ///< a0 of the null-solution case
  double max_simulation_time = 500.0;
  std::size_t horizon_iterations = 8;
};

struct GrowthConfig {
  std::optional<double> c0;
  std::optional<double> c1;
  double c2_range = 1e6;
  std::size_t grid = 1000;
};

struct VerifyConfig {
  std::size_t linear_energy_cases = 200;
  std::size_t regular_cases = 50;
  std::size_t minimal_cases = 20;
  std::size_t interpolation_cases = 10000;
  std::size_t envelope_draws = 1000;
  std::size_t local_existence_cases = 50;
  std::size_t tightness_cases = 100;
  /// Multiplies Gamma_2 in the regular well-posedness suite; 1 leaves it intact.
  double gamma2_scale = 1.0;
};

struct OutputConfig {
  std::string dir = "out";
  OutputFormat format = OutputFormat::Csv;
};

/// Everything one CLI run needs. Absent sections take the defaults above;
/// unknown keys and wrong types are rejected with ConfigError.
struct ScenarioConfig {
  Experiment experiment = Experiment::Verify;
  std::uint64_t seed = 20240521;
  SpectrumConfig spectrum;
  NonlinearityConfig nonlinearity;
  WeightConfig weight;
  std::vector<double> u0;
  std::vector<double> u1;
  PerturbationConfig perturbation;
  SolverConfig solver;
  LscConfig lsc;
  AgeConfig age;
  GrowthConfig growth;
  VerifyConfig verify;
  OutputConfig output;
};

[[nodiscard]] ScenarioConfig parse_config(const Json& j);
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully expanded config, defaults included; parse_config(to_json(c)) == c.
[[nodiscard]] Json to_json(const ScenarioConfig& c);

/// FNV-1a 64 of the canonical dump without the output section, as 16 hex
/// digits. Writing the same scenario to another directory keeps the hash.
[[nodiscard]] std::string config_hash(const ScenarioConfig& c);

[[nodiscard]] Spectrum make_spectrum(const SpectrumConfig& c);
[[nodiscard]] Nonlinearity make_nonlinearity(const NonlinearityConfig& c);
[[nodiscard]] Weight make_weight(const WeightConfig& c);

/// Initial state (u0, u1), checked against the spectrum length.
[[nodiscard]] State initial_state(const ScenarioConfig& c);
/// (u0 + eps d0, u1 + eps d1).
[[nodiscard]] State perturbed_state(const ScenarioConfig& c, double eps);

}  // namespace kirchhoff
