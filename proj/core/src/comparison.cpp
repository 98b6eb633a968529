#include "kirchhoff/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kirchhoff/bounds.hpp"
#include "kirchhoff/error.hpp"
#include "kirchhoff/ode.hpp"

namespace kirchhoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// log(1e300): the comparison solution is reported as overflowing past this.
const double kLogOverflow = std::log(1e300);
// Envelope checks stop once log Y reaches this, keeping every rate finite.
constexpr double kLogEnvelopeCap = 1e250;
// Lower bound for a calibrated c0 so that beta stays positive.
constexpr double kMinC0 = 1e-6;

void check_premise(double c0, double c1, double param, double F0) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw Error(Errc::InvalidArgument, "c0 must be positive");
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw Error(Errc::InvalidArgument, "c1 must be positive");
  if (!(param > 0.0)) throw Error(Errc::InvalidArgument, "weight parameter must be positive");
  if (!(F0 >= c1) || !std::isfinite(F0)) throw Error(Errc::InvalidArgument, "F0 must satisfy F0 >= c1");
}

double hermite(double t0, double y0, double d0, double t1, double y1, double d1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * d1;
}

}  // namespace

std::string_view to_string(EnvelopeFamily f) noexcept {
  return f == EnvelopeFamily::Analytic ? "analytic" : "quasi_analytic";
}

double beta_analytic(double c0, double c1, double r0, double F0) {
  check_premise(c0, c1, r0, F0);
  return c0 + c0 / r0 + (c0 / r0) * std::log(F0 / c1);
}

double beta_quasi_analytic(double c0, double c1, double c2, double F0) {
  check_premise(c0, c1, c2, F0);
  const double L = std::log(F0 / c1);
  return c0 + c0 * c2 * (1.0 + L) * (1.0 + std::log(3.0 + L));
}

GrowthEnvelope GrowthEnvelope::analytic(double c0, double c1, double r0, double F0) {
  return {EnvelopeFamily::Analytic, c0, c1, r0, beta_analytic(c0, c1, r0, F0), F0};
}

GrowthEnvelope GrowthEnvelope::quasi_analytic(double c0, double c1, double c2, double F0) {
  return {EnvelopeFamily::QuasiAnalytic, c0, c1, c2, beta_quasi_analytic(c0, c1, c2, F0), F0};
}

double GrowthEnvelope::log_rate(double z) const {
  const double l = z - std::log(c1);
  if (family == EnvelopeFamily::Analytic) return c0 * (1.0 + l / param);
  return c0 * (1.0 + param * l * std::log(2.0 + l));
}

double GrowthEnvelope::log_envelope(double t) const {
  const double e = std::exp(beta * t);
  return std::log(F0) + (family == EnvelopeFamily::Analytic ? e : std::exp(e));
}

double GrowthEnvelope::log_envelope_rate(double t) const {
  const double e = std::exp(beta * t);
  return family == EnvelopeFamily::Analytic ? beta * e : beta * e * std::exp(e);
}

double GrowthEnvelope::overflow_horizon() const {
  if (!(beta > 0.0)) return kInf;
  const double cap = std::log(kLogEnvelopeCap);
  return family == EnvelopeFamily::Analytic ? cap / beta : std::log(cap) / beta;
}

double ComparisonSolution::log_value(double t) const {
  if (samples.empty()) throw Error(Errc::EmptyTrajectory, "comparison solution has no samples");
  if (t < samples.front().t || t > samples.back().t) {
    if (overflow_time && t >= *overflow_time) return kInf;
    throw Error(Errc::InvalidArgument, "time outside the integrated range");
  }
  auto it = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const ComparisonSample& s, double x) { return s.t < x; });
  if (it->t == t) return it->log_y;
  const auto& b = *it;
  const auto& a = *(it - 1);
  return hermite(a.t, a.log_y, a.rate, b.t, b.log_y, b.rate, t);
}

double ComparisonSolution::value(double t) const { return std::exp(log_value(t)); }

ComparisonSolution integrate_comparison(const GrowthEnvelope& env, double t_end, double tol,
                                        std::span<const double> sample_times) {
  check_premise(env.c0, env.c1, env.param, env.F0);
  if (!(t_end > 0.0)) throw Error(Errc::InvalidArgument, "t_end must be positive");
  if (!(tol >= 1e-14 && tol <= 1e-3)) throw Error(Errc::InvalidArgument, "tol must lie in [1e-14, 1e-3]");

  const ode::Rhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = env.log_rate(y[0]);
  };
  const ode::StopPredicate stop = [](double, std::span<const double> y) {
    return y[0] > kLogOverflow;
  };
  ode::Options opts;
  opts.rtol = tol;
  opts.atol = tol;
  const double z0[] = {std::log(env.F0)};
  ode::Result res = ode::integrate_dopri5(rhs, 0.0, z0, t_end, opts, sample_times, stop);
  if (res.status == ode::Status::NonFinite || res.status == ode::Status::StepLimit)
    throw Error(Errc::NonFiniteState, "comparison equation could not be integrated");

  ComparisonSolution out;
  out.samples.reserve(res.samples.size());
  for (const auto& s : res.samples) out.samples.push_back({s.t, s.y[0], s.dydt[0]});

  if (res.status == ode::Status::Stopped && out.samples.size() >= 2) {
    const auto& a = out.samples[out.samples.size() - 2];
    const auto& b = out.samples.back();
    double lo = a.t;
    double hi = b.t;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (hermite(a.t, a.log_y, a.rate, b.t, b.log_y, b.rate, mid) > kLogOverflow ? hi : lo) = mid;
    }
    out.overflow_time = hi;
  }
  return out;
}

EnvelopeCheck verify_supersolution(const GrowthEnvelope& env, double t_end, std::size_t n_grid) {
  if (n_grid < 100) throw Error(Errc::InvalidArgument, "n_grid must be at least 100");
  if (!(t_end > 0.0)) throw Error(Errc::InvalidArgument, "t_end must be positive");
  EnvelopeCheck chk;
  chk.checked_until = std::min(t_end, env.overflow_horizon());

  chk.grid.reserve(n_grid + 1);
  chk.grid.push_back(0.0);
  const double t_lo = chk.checked_until * 1e-6;
  const double ratio = std::log(chk.checked_until / t_lo);
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n_grid - 1);
    chk.grid.push_back(i + 1 == n_grid ? chk.checked_until : t_lo * std::exp(ratio * s));
  }

  const double e0 = env.family == EnvelopeFamily::Analytic ? 1.0 : std::exp(1.0);
  const double z0 = env.log_envelope(0.0);
  chk.initial_datum_ok = std::abs(z0 - (std::log(env.F0) + e0)) <= 1e-12 * std::max(1.0, std::abs(z0));

  bool ok = true;
  chk.margin = kInf;
  chk.envelope_rate.reserve(chk.grid.size());
  chk.required_rate.reserve(chk.grid.size());
  for (double t : chk.grid) {
    const double lhs = env.log_envelope_rate(t);
    const double rhs = env.log_rate(env.log_envelope(t));
    chk.envelope_rate.push_back(lhs);
    chk.required_rate.push_back(rhs);
    const double m = lhs - rhs;
    chk.margin = std::min(chk.margin, m);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (!(m >= -1e-9 * scale)) {
      ok = false;
      if (!chk.first_failure) chk.first_failure = t;
    }
  }
  chk.pass = ok && chk.initial_datum_ok;
  return chk;
}

Calibration calibrate(const Trajectory& pilot, const Nonlinearity& nl, const Weight& w) {
  if (pilot.samples.empty()) throw Error(Errc::EmptyTrajectory, "pilot trajectory has no samples");
  if (w.family() != WeightFamily::Linear && w.family() != WeightFamily::QuasiAnalytic)
    throw Error(Errc::IncompatibleWeight, "calibration needs an analytic or quasi-analytic weight");
  const Spectrum& spec = pilot.spectrum;
  const auto& s0 = pilot.front();
  Calibration cal;
  cal.c1 = std::min(1.0, nl.nu0() * alpha_energy(spec, s0.u, s0.v, 0.0));
  if (!(cal.c1 > 0.0)) throw Error(Errc::InvalidArgument, "pilot trajectory has zero energy");
  cal.F0 = corrected_phi_energy(spec, nl, s0.u, s0.v, w);

  double need = 0.0;
  for (const auto& s : pilot.samples) {
    const double F = corrected_phi_energy(spec, nl, s.u, s.v, w);
    const double dF = corrected_phi_energy_rate(spec, nl, s.u, s.v, w);
    const double arg = std::max(0.0, std::log(F / cal.c1));
    need = std::max(need, dF / (F * (1.0 + phi_inverse(w, arg))));
  }
  cal.c0 = std::max(kMinC0, 1.01 * need);
  return cal;
}

GrowthEnvelope envelope_for(const Weight& w, const Calibration& cal, double c2_range) {
  switch (w.family()) {
    case WeightFamily::Linear: return GrowthEnvelope::analytic(cal.c0, cal.c1, w.r0(), cal.F0);
    case WeightFamily::QuasiAnalytic:
      return GrowthEnvelope::quasi_analytic(cal.c0, cal.c1, inv_phi_majorant_c2(w, c2_range),
                                            cal.F0);
    default: throw Error(Errc::IncompatibleWeight, "no growth envelope for this weight family");
  }
}

GrowthReport envelope_vs_simulation(const Trajectory& traj, const Nonlinearity& nl, const Weight& w,
                                    const GrowthEnvelope& env) {
  const bool analytic_pair = w.family() == WeightFamily::Linear &&
                             env.family == EnvelopeFamily::Analytic && w.r0() == env.param;
  const bool qa_pair =
      w.family() == WeightFamily::QuasiAnalytic && env.family == EnvelopeFamily::QuasiAnalytic;
  if (!analytic_pair && !qa_pair)
    throw Error(Errc::IncompatibleWeight, "weight does not match the envelope family");
  if (traj.samples.empty()) throw Error(Errc::EmptyTrajectory, "trajectory has no samples");

  const Spectrum& spec = traj.spectrum;
  const double t0 = traj.front().t;
  GrowthReport rep;
  rep.max_log_ratio = -kInf;
  double log_b_quarter = -kInf;
  double log_b_three = -kInf;

  std::vector<double> a(spec.size());
  for (const auto& s : traj.samples) {
    const double t = s.t - t0;
    GrowthRow row;
    row.t = s.t;
    row.log_f_phi = std::log(corrected_phi_energy(spec, nl, s.u, s.v, w));
    row.log_envelope = env.log_envelope(t);
    row.alpha_quarter = alpha_energy(spec, s.u, s.v, 0.25);
    row.alpha_three_quarters = alpha_energy(spec, s.u, s.v, 0.75);
    rep.max_log_ratio = std::max(rep.max_log_ratio, row.log_f_phi - row.log_envelope);

    for (std::size_t k = 0; k < spec.size(); ++k) a[k] = s.v[k] * s.v[k] + spec[k] * spec[k] * s.u[k] * s.u[k];
    double total = 0.0;
    for (double x : a) total += x;
    if (total > 0.0) {
      for (double b : {1.0, 3.0}) {
        const InterpolationResult r = interpolate(a, spec.values(), b, w);
        rep.worst_alpha_slack = std::max(rep.worst_alpha_slack, (r.lhs - r.bound) / r.bound);
        if (!r.holds()) rep.alpha_bounds_hold = false;
      }
    }

    const auto log_shape = [&](double alpha) {
      if (env.family == EnvelopeFamily::Analytic) return 4.0 * alpha * env.beta * t;
      return std::exp(std::max(2.0, 4.0 * alpha) * env.beta * t);
    };
    if (row.alpha_quarter > 0.0)
      log_b_quarter = std::max(log_b_quarter, std::log(row.alpha_quarter) - log_shape(0.25));
    if (row.alpha_three_quarters > 0.0)
      log_b_three = std::max(log_b_three, std::log(row.alpha_three_quarters) - log_shape(0.75));
    rep.rows.push_back(row);
  }
  rep.fitted_B_quarter = std::exp(log_b_quarter);
  rep.fitted_B_three_quarters = std::exp(log_b_three);
  return rep;
}

}  // namespace kirchhoff
