#include "kirchhoff/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kirchhoff/error.hpp"
#include "kirchhoff/ode.hpp"

namespace kirchhoff {

namespace {

// The per-step error target sits a decade below the requested tolerance so the
// global error over long horizons stays near tol.
constexpr double kLocalTolFactor = 0.1;

void check_tol(double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-3))
    throw Error(Errc::InvalidArgument, "tol must lie in [1e-14, 1e-3]");
}

void check_state(const Spectrum& spec, const State& s) {
  require_same_length(spec, s.u);
  require_same_length(spec, s.v);
  for (std::size_t k = 0; k < spec.size(); ++k)
    if (!std::isfinite(s.u[k]) || !std::isfinite(s.v[k]))
      throw Error(Errc::NonFiniteState, "initial state is not finite");
}

std::vector<double> pack(const State& s) {
  std::vector<double> y(s.u.values());
  y.insert(y.end(), s.v.begin(), s.v.end());
  return y;
}

Trajectory unpack(const Spectrum& spec, ode::Result&& res, double tol) {
  const std::size_t n = spec.size();
  Trajectory traj{spec, {}, {}};
  traj.samples.reserve(res.samples.size());
  for (auto& s : res.samples) {
    TrajectorySample ts;
    ts.t = s.t;
    ts.u = ModeVector(std::vector<double>(s.y.begin(), s.y.begin() + static_cast<std::ptrdiff_t>(n)));
    ts.v = ModeVector(std::vector<double>(s.y.begin() + static_cast<std::ptrdiff_t>(n), s.y.end()));
    ts.a = ModeVector(
        std::vector<double>(s.dydt.begin() + static_cast<std::ptrdiff_t>(n), s.dydt.end()));
    ts.on_grid = s.on_grid;
    traj.samples.push_back(std::move(ts));
  }
  traj.info.tol = tol;
  traj.info.accepted_steps = res.stats.accepted;
  traj.info.rejected_steps = res.stats.rejected;
  traj.info.rhs_evals = res.stats.rhs_evals;
  return traj;
}

double hermite(double p0, double m0, double p1, double m1, double h, double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * p1 +
         (s3 - s2) * h * m1;
}

double stiffness_sum(const Spectrum& spec, std::span<const double> u) {
  double sigma = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) sigma += spec[k] * spec[k] * u[k] * u[k];
  return sigma;
}

}  // namespace

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
  g[n] = t1;
  return g;
}

State Trajectory::interpolate(double t) const {
  if (samples.empty()) throw Error(Errc::EmptyTrajectory, "cannot interpolate an empty trajectory");
  if (t <= samples.front().t) return samples.front().state();
  if (t >= samples.back().t) return samples.back().state();
  const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double x, const TrajectorySample& s) { return x < s.t; });
  const TrajectorySample& b = *it;
  const TrajectorySample& a = *(it - 1);
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  State out{t, ModeVector(a.u.size()), ModeVector(a.u.size())};
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    out.u[k] = hermite(a.u[k], a.v[k], b.u[k], b.v[k], h, s);
    out.v[k] = hermite(a.v[k], a.a[k], b.v[k], b.a[k], h, s);
  }
  return out;
}

double hamiltonian(const Spectrum& spec, const Nonlinearity& nl, const ModeVector& u,
                   const ModeVector& v) {
  return v.norm_sq() + nl.primitive(power_norm_sq(spec, u, 0.5));
}

double sobolev_energy(const Spectrum& spec, const ModeVector& u, const ModeVector& v) {
  require_same_length(spec, u);
  require_same_length(spec, v);
  double s = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double l = spec[k];
    s += (1.0 + l) * v[k] * v[k] + (l * l + l * l * l) * u[k] * u[k];
  }
  return s;
}

double alpha_energy(const Spectrum& spec, const ModeVector& u, const ModeVector& v, double alpha) {
  return power_norm_sq(spec, v, alpha) + power_norm_sq(spec, u, alpha + 0.5);
}

double continuation_quantity(const Spectrum& spec, const ModeVector& u, const ModeVector& v) {
  return power_norm_sq(spec, v, 0.25) + power_norm_sq(spec, u, 0.75);
}

double corrected_phi_energy(const Spectrum& spec, const Nonlinearity& nl, const ModeVector& u,
                            const ModeVector& v, const Weight& weight) {
  require_same_length(spec, u);
  require_same_length(spec, v);
  const double c = nl.value(stiffness_sum(spec, u.coords()));
  double f = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double l = spec[k];
    const double a = v[k] * v[k] + c * l * l * u[k] * u[k];
    f += std::max(1.0, l) * a * std::exp(weight(l));
  }
  return f;
}

double uncorrected_phi_energy(const Spectrum& spec, const ModeVector& u, const ModeVector& v,
                              const Weight& weight) {
  require_same_length(spec, u);
  require_same_length(spec, v);
  double f = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double l = spec[k];
    f += std::max(1.0, l) * (v[k] * v[k] + l * l * u[k] * u[k]) * std::exp(weight(l));
  }
  return f;
}

double corrected_phi_energy_rate(const Spectrum& spec, const Nonlinearity& nl, const ModeVector& u,
                                 const ModeVector& v, const Weight& weight) {
  require_same_length(spec, u);
  require_same_length(spec, v);
  double sigma = 0.0;
  double sigma_rate = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double l2 = spec[k] * spec[k];
    sigma += l2 * u[k] * u[k];
    sigma_rate += 2.0 * l2 * u[k] * v[k];
    weighted += std::max(1.0, spec[k]) * std::exp(weight(spec[k])) * l2 * u[k] * u[k];
  }
  return nl.slope(sigma) * sigma_rate * weighted;
}

EnergyReport measure(const Spectrum& spec, const Nonlinearity& nl, const State& state,
                     const Weight& weight, std::span<const double> alphas,
                     std::optional<double> cutoff) {
  check_state(spec, state);
  EnergyReport r;
  r.hamiltonian = hamiltonian(spec, nl, state.u, state.v);
  r.sobolev = sobolev_energy(spec, state.u, state.v);
  for (double a : alphas) r.alpha_energies[a] = alpha_energy(spec, state.u, state.v, a);
  r.f_phi = corrected_phi_energy(spec, nl, state.u, state.v, weight);
  r.f_phi_hat = uncorrected_phi_energy(spec, state.u, state.v, weight);
  if (cutoff) {
    const FrequencySplit su = split(spec, state.u, *cutoff);
    const FrequencySplit sv = split(spec, state.v, *cutoff);
    r.split = std::make_pair(sobolev_energy(spec, su.low, sv.low),
                             sobolev_energy(spec, su.high, sv.high));
  }
  return r;
}

double hamiltonian_drift(const Trajectory& traj, const Nonlinearity& nl) {
  if (traj.samples.empty()) throw Error(Errc::EmptyTrajectory, "empty trajectory");
  const double h0 = hamiltonian(traj.spectrum, nl, traj.front().u, traj.front().v);
  double drift = 0.0;
  for (const auto& s : traj.samples)
    drift = std::max(drift, std::abs(hamiltonian(traj.spectrum, nl, s.u, s.v) - h0));
  return drift / std::max(1.0, h0);
}

Trajectory evolve_kirchhoff(const Spectrum& spec, const Nonlinearity& nl, const State& init,
                            double t_end, double tol, std::span<const double> sample_times) {
  check_tol(tol);
  check_state(spec, init);
  if (!(t_end > init.t)) throw Error(Errc::InvalidArgument, "t_end must exceed the initial time");

  const std::size_t n = spec.size();
  std::vector<double> l2(n);
  for (std::size_t k = 0; k < n; ++k) l2[k] = spec[k] * spec[k];

  // The coefficient is re-evaluated at every stage from the stage positions.
  const ode::Rhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    double sigma = 0.0;
    for (std::size_t k = 0; k < n; ++k) sigma += l2[k] * y[k] * y[k];
    const double c = nl.value(sigma);
    for (std::size_t k = 0; k < n; ++k) {
      dy[k] = y[n + k];
      dy[n + k] = -c * l2[k] * y[k];
    }
  };

  ode::Options opts;
  opts.rtol = kLocalTolFactor * tol;
  opts.atol = kLocalTolFactor * tol;
  const std::vector<double> y0 = pack(init);
  ode::Result res = ode::integrate_dopri5(rhs, init.t, y0, t_end, opts, sample_times);
  if (res.status == ode::Status::NonFinite)
    throw Error(Errc::NonFiniteState, "Kirchhoff integration produced a non-finite state");
  if (res.status != ode::Status::Completed)
    throw Error(Errc::NonFiniteState, "Kirchhoff integration did not reach t_end");

  Trajectory traj = unpack(spec, std::move(res), tol);
  const double drift = hamiltonian_drift(traj, nl);
  traj.info.hamiltonian_drift = drift;
  if (drift > 1e3 * tol)
    throw Error(Errc::DriftExceeded, "Hamiltonian drift " + std::to_string(drift) +
                                         " exceeds 1e3 * tol");
  return traj;
}

Trajectory evolve_linear(const Spectrum& spec, const TimeCoefficient& coef, const State& init,
                         double t_end, double tol, std::span<const double> sample_times) {
  check_tol(tol);
  check_state(spec, init);
  if (!coef.c) throw Error(Errc::InvalidArgument, "coefficient callable missing");
  if (!(coef.nu0 > 0.0) || !(coef.C0 >= coef.nu0) || !(coef.Lambda0 >= 0.0))
    throw Error(Errc::InvalidArgument, "coefficient bounds must satisfy 0 < nu0 <= C0, Lambda0 >= 0");
  if (!(t_end > init.t)) throw Error(Errc::InvalidArgument, "t_end must exceed the initial time");

  const std::size_t n = spec.size();
  std::vector<double> l2(n);
  for (std::size_t k = 0; k < n; ++k) l2[k] = spec[k] * spec[k];

  const ode::Rhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const double c = coef.c(t);
    if (!(c >= coef.nu0 && c <= coef.C0))
      throw Error(Errc::CoefficientBoundViolated,
                  "c(" + std::to_string(t) + ") = " + std::to_string(c) + " leaves [nu0, C0]");
    for (std::size_t k = 0; k < n; ++k) {
      dy[k] = y[n + k];
      dy[n + k] = -c * l2[k] * y[k];
    }
  };

  ode::Options opts;
  opts.rtol = kLocalTolFactor * tol;
  opts.atol = kLocalTolFactor * tol;
  const std::vector<double> y0 = pack(init);
  ode::Result res = ode::integrate_dopri5(rhs, init.t, y0, t_end, opts, sample_times);
  if (res.status != ode::Status::Completed)
    throw Error(Errc::NonFiniteState, "linear integration did not reach t_end");
  return unpack(spec, std::move(res), tol);
}

std::optional<double> escape_time(const Trajectory& traj, double threshold) {
  if (!(threshold > 0.0)) throw Error(Errc::InvalidArgument, "threshold must be positive");
  if (traj.samples.empty()) throw Error(Errc::EmptyTrajectory, "empty trajectory");
  const Spectrum& spec = traj.spectrum;
  auto q = [&](const ModeVector& u, const ModeVector& v) {
    return continuation_quantity(spec, u, v);
  };
  if (q(traj.front().u, traj.front().v) >= threshold) return traj.front().t;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    if (q(s.u, s.v) < threshold) continue;
    double lo = traj.samples[i - 1].t;
    double hi = s.t;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const State st = traj.interpolate(mid);
      if (q(st.u, st.v) >= threshold)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }
  return std::nullopt;
}

}  // namespace kirchhoff
