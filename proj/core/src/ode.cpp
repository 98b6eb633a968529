#include "kirchhoff/ode.hpp"

#include <algorithm>
#include <cmath>

#include "kirchhoff/error.hpp"

namespace kirchhoff::ode {

namespace {

// Dormand & Prince (1980) tableau with the Shampine/Hairer dense output.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kFacMin = 0.2;   // largest shrink is 1/5
constexpr double kFacMax = 10.0;  // largest growth

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double initial_step(const Rhs& rhs, double t0, std::span<const double> y0,
                    std::span<const double> f0, const Options& o, double span, Stats& stats) {
  const std::size_t n = y0.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = o.atol + o.rtol * std::abs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min({h, o.h_max, span});
  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h * f0[i];
  rhs(t0 + h, y1, f1);
  ++stats.rhs_evals;
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = o.atol + o.rtol * std::abs(y0[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, o.h_max, span});
}

}  // namespace

Result integrate_dopri5(const Rhs& rhs, double t0, std::span<const double> y0, double t_end,
                        const Options& opts, std::span<const double> output_times,
                        const StopPredicate& stop) {
  if (!(t_end > t0)) throw Error(Errc::InvalidArgument, "integrate_dopri5 needs t_end > t0");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
    throw Error(Errc::InvalidArgument, "tolerances must be positive");

  const std::size_t n = y0.size();
  Result res;

  std::vector<double> grid;
  for (double t : output_times)
    if (t > t0 && t < t_end) grid.push_back(t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::size_t next_out = 0;

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  std::vector<double> r1(n), r2(n), r3(n), r4(n), r5(n);

  rhs(t0, y, k1);
  ++res.stats.rhs_evals;
  res.samples.push_back({t0, y, k1, true});
  if (!all_finite(y) || !all_finite(k1)) {
    res.status = Status::NonFinite;
    return res;
  }

  double t = t0;
  double h = opts.h_init > 0.0 ? std::min(opts.h_init, t_end - t0)
                               : initial_step(rhs, t0, y, k1, opts, t_end - t0, res.stats);
  double err_old = 1e-4;
  bool last_rejected = false;

  while (t < t_end) {
    if (res.stats.accepted + res.stats.rejected >= opts.max_steps) {
      res.status = Status::StepLimit;
      return res;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      res.status = Status::StepLimit;
      return res;
    }
    bool last = false;
    if (t + 1.01 * h >= t_end) {
      h = t_end - t;
      last = true;
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = last ? t_end : t + h;
    rhs(t_new, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t_new, ynew, k7);
    res.stats.rhs_evals += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sk = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sk) * (e / sk);
    }
    err = std::sqrt(err / static_cast<double>(std::max<std::size_t>(n, 1)));

    if (!std::isfinite(err)) {
      // Treat as a failed step; shrink hard.
      ++res.stats.rejected;
      h *= kFacMin;
      last_rejected = true;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        res.status = Status::NonFinite;
        return res;
      }
      continue;
    }

    const double fac11 = std::pow(err, kExpo1);
    double fac = fac11 / std::pow(err_old, kBeta);
    fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
    double h_new = h / fac;

    if (err <= 1.0) {
      err_old = std::max(err, 1e-4);
      ++res.stats.accepted;

      // Dense output coefficients, then any requested times inside (t, t_new).
      if (next_out < grid.size() && grid[next_out] < t_new) {
        for (std::size_t i = 0; i < n; ++i) {
          r1[i] = y[i];
          r2[i] = ynew[i] - y[i];
          r3[i] = h * k1[i] - r2[i];
          r4[i] = r2[i] - h * k7[i] - r3[i];
          r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        while (next_out < grid.size() && grid[next_out] < t_new) {
          const double to = grid[next_out++];
          if (to <= t) continue;
          const double th = (to - t) / h;
          const double th1 = 1.0 - th;
          Sample s{to, std::vector<double>(n), std::vector<double>(n), true};
          for (std::size_t i = 0; i < n; ++i)
            s.y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
          rhs(to, s.y, s.dydt);
          ++res.stats.rhs_evals;
          res.samples.push_back(std::move(s));
        }
      }
      // Skip a requested time that coincides with the step end.
      while (next_out < grid.size() && grid[next_out] == t_new) ++next_out;

      y.swap(ynew);
      k1.swap(k7);  // FSAL
      t = t_new;
      const bool is_grid = last || std::binary_search(grid.begin(), grid.end(), t);
      res.samples.push_back({t, y, k1, is_grid});

      if (!all_finite(y) || !all_finite(k1)) {
        res.status = Status::NonFinite;
        return res;
      }
      if (stop && stop(t, y)) {
        res.status = Status::Stopped;
        return res;
      }
      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
      h = std::min(h_new, opts.h_max);
    } else {
      ++res.stats.rejected;
      h /= std::min(1.0 / kFacMin, fac11 / kSafety);
      last_rejected = true;
    }
  }
  return res;
}

}  // namespace kirchhoff::ode
