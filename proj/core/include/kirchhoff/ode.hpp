#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace kirchhoff::ode {

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Called after every accepted step; returning true halts the integration.
using StopPredicate = std::function<bool(double t, std::span<const double> y)>;

struct Options {
  double rtol = 1e-8;
  double atol = 1e-8;
  double h_init = 0.0;  ///< 0 selects the step automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

enum class Status { Completed, Stopped, NonFinite, StepLimit };

struct Sample {
  double t = 0.0;
  std::vector<double> y;
  std::vector<double> dydt;
  bool on_grid = false;  ///< true when the time was requested by the caller
};

struct Result {
  std::vector<Sample> samples;  ///< strictly increasing in t
  Stats stats;
  Status status = Status::Completed;
};

/// Dormand-Prince 5(4) with PI step-size control and 4th-order dense output.
///
/// Samples contain the initial state, every accepted step and every requested
/// output time inside (t0, t_end]. Output times outside that interval are
/// ignored. The final sample is always t_end unless the run halts early.
Result integrate_dopri5(const Rhs& rhs, double t0, std::span<const double> y0, double t_end,
                        const Options& opts, std::span<const double> output_times = {},
                        const StopPredicate& stop = {});

}  // namespace kirchhoff::ode
