#include "kirchhoff/model.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

constexpr int kRangeGrid = 4096;

void require_nonnegative(double sigma) {
  if (!(sigma >= 0.0)) throw Error(Errc::NegativeSigma, "sigma must be >= 0");
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 100 && (b - a) > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

std::string_view to_string(WeightFamily family) noexcept {
  switch (family) {
    case WeightFamily::Zero: return "zero";
    case WeightFamily::Linear: return "linear";
    case WeightFamily::QuasiAnalytic: return "quasi-analytic";
    case WeightFamily::Custom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(WeightClass cls) noexcept {
  switch (cls) {
    case WeightClass::Sobolev: return "sobolev";
    case WeightClass::Analytic: return "analytic";
    case WeightClass::QuasiAnalytic: return "quasi-analytic";
    case WeightClass::Unclassified: return "unclassified";
  }
  return "unknown";
}

std::string_view to_string(NonlinearityFamily family) noexcept {
  switch (family) {
    case NonlinearityFamily::Constant: return "constant";
    case NonlinearityFamily::Affine: return "affine";
    case NonlinearityFamily::Custom: return "custom";
  }
  return "unknown";
}

// --- Weight -----------------------------------------------------------------

Weight Weight::zero() {
  return Weight(WeightFamily::Zero, 0.0, [](double) { return 0.0; }, WeightClass::Sobolev);
}

Weight Weight::linear(double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw Error(Errc::InvalidArgument, "linear weight needs r0 > 0");
  return Weight(WeightFamily::Linear, r0, [r0](double s) { return r0 * s; },
                WeightClass::Analytic);
}

Weight Weight::quasi_analytic() {
  return Weight(WeightFamily::QuasiAnalytic, 0.0,
                [](double s) { return s / std::log(2.0 + s); }, WeightClass::QuasiAnalytic);
}

Weight Weight::custom(std::function<double(double)> phi, double check_range, WeightClass declared) {
  if (!phi) throw Error(Errc::InvalidArgument, "custom weight needs a callable");
  if (std::abs(phi(0.0)) > 1e-14)
    throw Error(Errc::InvalidArgument, "custom weight must satisfy phi(0) = 0");
  constexpr int n = 2048;
  double prev = phi(0.0);
  for (int i = 1; i <= n; ++i) {
    const double s = check_range * static_cast<double>(i) / n;
    const double v = phi(s);
    if (!std::isfinite(v) || !(v > prev))
      throw Error(Errc::NotStrictlyIncreasing,
                  "custom weight is not strictly increasing near " + std::to_string(s));
    prev = v;
  }
  return Weight(WeightFamily::Custom, 0.0, std::move(phi), declared);
}

double Weight::operator()(double sigma) const { return phi_(sigma); }

WeightClass Weight::classify() const noexcept {
  // int_1^inf phi(s)/s^2 ds: 0 for zero, diverges like log for r0*s, and like
  // log log for s/log(2+s).
  return declared_;
}

double phi_inverse(const Weight& w, double y) {
  if (w.family() == WeightFamily::Zero)
    throw Error(Errc::ZeroWeightNotInvertible, "the zero weight has no inverse");
  if (!(y >= 0.0) || !std::isfinite(y)) throw Error(Errc::InvalidArgument, "phi_inverse needs y >= 0");
  if (y == 0.0) return 0.0;
  if (w.family() == WeightFamily::Linear) return y / w.r0();

  double lo = 0.0;
  double hi = std::max(1.0, y);
  while (w(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw Error(Errc::InvalidArgument, "phi_inverse bracket overflow");
  }
  // Bisect down to adjacent doubles; phi is strictly increasing.
  for (int it = 0; it < 2200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (w(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  // Pick whichever bracket end is closer in value.
  return std::abs(w(lo) - y) <= std::abs(w(hi) - y) ? lo : hi;
}

double inv_phi_majorant_c2(const Weight& w, double y_max) {
  if (w.family() != WeightFamily::QuasiAnalytic)
    throw Error(Errc::WrongFamily, "c2 is defined for the classical quasi-analytic weight");
  if (!(y_max > 1e-6)) throw Error(Errc::InvalidArgument, "y_max must exceed 1e-6");
  constexpr int n = 20000;
  const double lo = std::log(1e-6);
  const double hi = std::log(y_max);
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = std::exp(lo + (hi - lo) * i / n);
    best = std::max(best, phi_inverse(w, y) / (y * std::log(2.0 + y)));
  }
  return 1.05 * best;
}

// --- Nonlinearity ------------------------------------------------------------

Nonlinearity Nonlinearity::constant(double nu0) {
  if (!(nu0 > 0.0) || !std::isfinite(nu0))
    throw Error(Errc::HyperbolicityViolated, "nu0 must be positive");
  return Nonlinearity(NonlinearityFamily::Constant, nu0, 0.0, [nu0](double) { return nu0; },
                      [](double) { return 0.0; });
}

Nonlinearity Nonlinearity::affine(double nu0, double slope) {
  if (!(nu0 > 0.0) || !std::isfinite(nu0))
    throw Error(Errc::HyperbolicityViolated, "nu0 must be positive");
  if (!(slope >= 0.0) || !std::isfinite(slope))
    throw Error(Errc::HyperbolicityViolated, "affine slope must be nonnegative");
  return Nonlinearity(NonlinearityFamily::Affine, nu0, slope,
                      [nu0, slope](double s) { return nu0 + slope * s; },
                      [slope](double) { return slope; });
}

Nonlinearity Nonlinearity::custom(Fn m, std::optional<Fn> m_prime, double nu0,
                                  double check_range) {
  if (!m) throw Error(Errc::InvalidArgument, "custom nonlinearity needs a callable");
  if (!(nu0 > 0.0)) throw Error(Errc::HyperbolicityViolated, "nu0 must be positive");
  constexpr int n = 1024;
  for (int i = 0; i <= n; ++i) {
    const double s = check_range * static_cast<double>(i) / n;
    if (!(m(s) >= nu0))
      throw Error(Errc::HyperbolicityViolated, "m(" + std::to_string(s) + ") < nu0");
  }
  return Nonlinearity(NonlinearityFamily::Custom, nu0, 0.0, std::move(m), std::move(m_prime));
}

double Nonlinearity::value(double sigma) const {
  require_nonnegative(sigma);
  return m_(sigma);
}

double Nonlinearity::slope(double sigma) const {
  require_nonnegative(sigma);
  if (m_prime_) return (*m_prime_)(sigma);
  const double h = 1e-6 * std::max(1.0, sigma);
  if (sigma < h)
    return (-3.0 * m_(sigma) + 4.0 * m_(sigma + h) - m_(sigma + 2.0 * h)) / (2.0 * h);
  return (m_(sigma + h) - m_(sigma - h)) / (2.0 * h);
}

double Nonlinearity::primitive(double sigma) const {
  require_nonnegative(sigma);
  switch (family_) {
    case NonlinearityFamily::Constant: return nu0_ * sigma;
    case NonlinearityFamily::Affine: return nu0_ * sigma + 0.5 * slope_ * sigma * sigma;
    case NonlinearityFamily::Custom: break;
  }
  if (sigma == 0.0) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(m_, 0.0, sigma, 20, 1e-13,
                                                                        &err);
}

double range_max(const std::function<double(double)>& f, double lo, double hi) {
  if (!(hi >= lo)) throw Error(Errc::InvalidArgument, "range_max needs lo <= hi");
  if (hi == lo) return f(lo);
  const double h = (hi - lo) / kRangeGrid;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kRangeGrid; ++i) {
    const double v = f(lo + h * i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = lo + h * std::max(0, best - 1);
  const double b = lo + h * std::min(kRangeGrid, best + 1);
  return std::max(best_val, golden_max(f, a, b));
}

double max_coefficient(const Nonlinearity& nl, double r0_sq) {
  if (nl.family() == NonlinearityFamily::Constant) return nl.nu0();
  if (nl.family() == NonlinearityFamily::Affine) return nl.value(r0_sq);
  return range_max([&nl](double s) { return nl.value(s); }, 0.0, r0_sq);
}

double max_slope(const Nonlinearity& nl, double r0_sq) {
  if (nl.family() != NonlinearityFamily::Custom) return std::abs(nl.slope(0.0));
  return range_max([&nl](double s) { return std::abs(nl.slope(s)); }, 0.0, r0_sq);
}

}  // namespace kirchhoff
