#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kirchhoff/model.hpp"
#include "kirchhoff/spectrum.hpp"

namespace kirchhoff {

/// Position and velocity coordinates at time t.
struct State {
  double t = 0.0;
  ModeVector u;
  ModeVector v;

  friend bool operator==(const State&, const State&) = default;
};

struct TrajectorySample {
  double t = 0.0;
  ModeVector u;
  ModeVector v;
  ModeVector a;  ///< acceleration u'' at t, kept for Hermite interpolation
  bool on_grid = false;

  [[nodiscard]] State state() const { return {t, u, v}; }
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

struct SolverInfo {
  double tol = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evals = 0;
  /// max_t |H(t) - H(0)| / max(1, H(0)); absent for linear runs.
  std::optional<double> hamiltonian_drift;

  friend bool operator==(const SolverInfo&, const SolverInfo&) = default;
};

/// Sampled solution: the caller's grid plus every accepted step.
struct Trajectory {
  Spectrum spectrum;
  std::vector<TrajectorySample> samples;
  SolverInfo info;

  [[nodiscard]] const TrajectorySample& front() const { return samples.front(); }
  [[nodiscard]] const TrajectorySample& back() const { return samples.back(); }
  /// Cubic Hermite interpolation between the bracketing samples.
  [[nodiscard]] State interpolate(double t) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Time-dependent coefficient c(t) of the linear equation z'' + c(t) A z = 0
/// with certified bounds nu0 <= c <= C0 and |c'| <= Lambda0.
struct TimeCoefficient {
  std::function<double(double)> c;
  double nu0 = 1.0;
  double C0 = 1.0;
  double Lambda0 = 0.0;
};

/// Integrates u_k'' = -m(sum_j lambda_j^2 u_j^2) lambda_k^2 u_k with a 5(4)
/// embedded pair at relative tolerance tol. Raises DriftExceeded when the
/// Hamiltonian drifts by more than 1e3 * tol.
[[nodiscard]] Trajectory evolve_kirchhoff(const Spectrum& spec, const Nonlinearity& nl,
                                          const State& init, double t_end, double tol,
                                          std::span<const double> sample_times = {});

/// Integrates z_k'' = -c(t) lambda_k^2 z_k.
[[nodiscard]] Trajectory evolve_linear(const Spectrum& spec, const TimeCoefficient& coef,
                                       const State& init, double t_end, double tol,
                                       std::span<const double> sample_times = {});

/// |v|^2 + M(|A^{1/2} u|^2)
[[nodiscard]] double hamiltonian(const Spectrum& spec, const Nonlinearity& nl, const ModeVector& u,
                                 const ModeVector& v);

/// E(u, v) = |v|^2 + |A^{1/4} v|^2 + |A^{1/2} u|^2 + |A^{3/4} u|^2
[[nodiscard]] double sobolev_energy(const Spectrum& spec, const ModeVector& u,
                                    const ModeVector& v);

/// |A^alpha v|^2 + |A^{alpha + 1/2} u|^2
[[nodiscard]] double alpha_energy(const Spectrum& spec, const ModeVector& u, const ModeVector& v,
                                  double alpha);

/// |A^{1/4} v|^2 + |A^{3/4} u|^2, the quantity that blows up at the end of the
/// life span.
[[nodiscard]] double continuation_quantity(const Spectrum& spec, const ModeVector& u,
                                           const ModeVector& v);

/// Corrected phi-energy sum max{1, l_k} a_k exp(phi(l_k)) with
/// a_k = v_k^2 + m(|A^{1/2}u|^2) l_k^2 u_k^2.
[[nodiscard]] double corrected_phi_energy(const Spectrum& spec, const Nonlinearity& nl,
                                          const ModeVector& u, const ModeVector& v,
                                          const Weight& weight);

/// Same sum with v_k^2 + l_k^2 u_k^2 in place of a_k.
[[nodiscard]] double uncorrected_phi_energy(const Spectrum& spec, const ModeVector& u,
                                            const ModeVector& v, const Weight& weight);

/// Exact time derivative of the corrected phi-energy along a Kirchhoff
/// trajectory.
[[nodiscard]] double corrected_phi_energy_rate(const Spectrum& spec, const Nonlinearity& nl,
                                               const ModeVector& u, const ModeVector& v,
                                               const Weight& weight);

struct EnergyReport {
  double hamiltonian = 0.0;
  double sobolev = 0.0;
  std::map<double, double> alpha_energies;
  double f_phi = 0.0;
  double f_phi_hat = 0.0;
  std::optional<std::pair<double, double>> split;  ///< (low, high) parts of sobolev
};

[[nodiscard]] EnergyReport measure(const Spectrum& spec, const Nonlinearity& nl, const State& state,
                                   const Weight& weight, std::span<const double> alphas,
                                   std::optional<double> cutoff = std::nullopt);

/// First time at which |A^{1/4}v|^2 + |A^{3/4}u|^2 reaches threshold, refined
/// by bisection on the Hermite interpolant between bracketing samples.
[[nodiscard]] std::optional<double> escape_time(const Trajectory& traj, double threshold);

/// Maximum Hamiltonian drift along a trajectory relative to max(1, H(0)).
[[nodiscard]] double hamiltonian_drift(const Trajectory& traj, const Nonlinearity& nl);

/// n + 1 equally spaced times on [t0, t1].
[[nodiscard]] std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

}  // namespace kirchhoff
