#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kirchhoff/config.hpp"
#include "kirchhoff/io.hpp"

namespace kirchhoff {

std::string_view library_version() noexcept;

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  Experiment experiment = Experiment::Verify;
  Table rows;
  std::vector<Verdict> verdicts;
  std::vector<std::pair<std::string, Table>> extra_tables;
  /// Constants and other scalars worth keeping next to the rows.
  Json summary = Json::object();
  /// Config hash, seed, version and the canonical config.
  Json metadata = Json::object();
  /// Set by the simulate experiment, which exports the trajectory itself.
  std::optional<Json> trajectory;

  [[nodiscard]] bool all_pass() const;
};

/// Writes rows, verdicts and extra tables in the requested format plus
/// metadata.json. Returns the file names written, in order. No timestamps or
/// host details are recorded, so reruns reproduce the files byte for byte.
std::vector<std::filesystem::path> write_result(const ExperimentResult& r,
                                                const std::filesystem::path& dir,
                                                OutputFormat format);

/// Largest E-energy of u - v over the common grid samples of two runs.
[[nodiscard]] double sup_energy_gap(const Trajectory& a, const Trajectory& b);

/// Samples flagged as belonging to the caller's output grid.
[[nodiscard]] std::vector<TrajectorySample> grid_samples(const Trajectory& traj);

/// Base run plus one perturbed run per epsilon on [0, t_end]; checks the
/// regular well-posedness bound, monotone decrease of the sup gap along the
/// epsilon grid and its vanishing at the end of the grid.
[[nodiscard]] ExperimentResult run_lsc(const ScenarioConfig& cfg);

/// Guaranteed times and closed-form life-span bounds per epsilon, with the
/// local-existence hypotheses checked and confinement below 2 R1 confirmed by
/// simulation. Raises HypothesisFailed when no epsilon is admissible.
[[nodiscard]] ExperimentResult run_age(const ScenarioConfig& cfg);

/// Calibrates the growth envelope of the corrected phi-energy on a pilot run
/// and checks supersolution, comparison solution and simulation against it.
[[nodiscard]] ExperimentResult run_growth(const ScenarioConfig& cfg);

/// Plain integration of the configured data.
[[nodiscard]] ExperimentResult run_simulate(const ScenarioConfig& cfg);

/// Dispatches on cfg.experiment and fills the metadata.
[[nodiscard]] ExperimentResult run_experiment(const ScenarioConfig& cfg);

}  // namespace kirchhoff
