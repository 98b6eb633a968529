#include "kirchhoff/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

double ModeVector::norm_sq() const noexcept {
  double s = 0.0;
  for (double x : c_) s += x * x;
  return s;
}

ModeVector& ModeVector::operator+=(const ModeVector& other) {
  if (other.size() != size()) throw Error(Errc::LengthMismatch, "ModeVector sizes differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += other.c_[k];
  return *this;
}

ModeVector& ModeVector::operator-=(const ModeVector& other) {
  if (other.size() != size()) throw Error(Errc::LengthMismatch, "ModeVector sizes differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= other.c_[k];
  return *this;
}

ModeVector& ModeVector::operator*=(double s) noexcept {
  for (double& x : c_) x *= s;
  return *this;
}

Spectrum::Spectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw Error(Errc::InvalidSpectrum, "spectrum must be nonempty");
  for (double l : lambdas_) {
    if (!std::isfinite(l) || l < 0.0)
      throw Error(Errc::InvalidSpectrum, "eigenvalues must be finite and nonnegative");
  }
  if (!std::is_sorted(lambdas_.begin(), lambdas_.end()))
    throw Error(Errc::InvalidSpectrum, "eigenvalues must be sorted nondecreasing");
}

Spectrum Spectrum::linear(std::size_t n) {
  std::vector<double> l(n);
  for (std::size_t k = 0; k < n; ++k) l[k] = static_cast<double>(k + 1);
  return Spectrum(std::move(l));
}

Spectrum Spectrum::square_root(std::size_t n) {
  std::vector<double> l(n);
  for (std::size_t k = 0; k < n; ++k) l[k] = std::sqrt(static_cast<double>(k + 1));
  return Spectrum(std::move(l));
}

Spectrum Spectrum::lacunary(std::size_t n) {
  std::vector<double> l(n);
  for (std::size_t k = 0; k < n; ++k) l[k] = std::ldexp(1.0, static_cast<int>(k + 1));
  return Spectrum(std::move(l));
}

double Spectrum::power_weight(std::size_t k, double alpha) const {
  return std::pow(lambdas_[k], 2.0 * alpha);
}

void require_same_length(const Spectrum& spec, const ModeVector& z) {
  if (z.size() != spec.size()) {
    throw Error(Errc::LengthMismatch, "vector has " + std::to_string(z.size()) +
                                          " coordinates, spectrum has " +
                                          std::to_string(spec.size()));
  }
}

ModeVector apply_power(const Spectrum& spec, const ModeVector& z, double alpha) {
  require_same_length(spec, z);
  ModeVector out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (spec[k] == 0.0 && alpha < 0.0) {
      if (z[k] != 0.0)
        throw Error(Errc::NegativePowerOnKernel,
                    "negative power applied to nonzero kernel coordinate " + std::to_string(k));
      continue;
    }
    out[k] = spec.power_weight(k, alpha) * z[k];
  }
  return out;
}

double power_norm_sq(const Spectrum& spec, const ModeVector& z, double alpha) {
  require_same_length(spec, z);
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k] == 0.0) continue;
    if (spec[k] == 0.0 && alpha < 0.0)
      throw Error(Errc::NegativePowerOnKernel, "negative power on nonzero kernel coordinate");
    s += std::pow(spec[k], 4.0 * alpha) * z[k] * z[k];
  }
  return s;
}

FrequencySplit split(const Spectrum& spec, const ModeVector& z, double cutoff) {
  require_same_length(spec, z);
  if (!(cutoff > 0.0)) throw Error(Errc::NonpositiveCutoff, "cutoff must be positive");
  FrequencySplit out{cutoff, ModeVector(z.size()), ModeVector(z.size())};
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (spec[k] <= cutoff)
      out.low[k] = z[k];
    else
      out.high[k] = z[k];
  }
  return out;
}

double gevrey_norm_sq(const Spectrum& spec, const ModeVector& z, const Weight& weight,
                      double alpha) {
  require_same_length(spec, z);
  if (alpha < 0.0) throw Error(Errc::InvalidArgument, "gevrey_norm_sq needs alpha >= 0");
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k] == 0.0) continue;
    s += std::pow(spec[k], 4.0 * alpha) * std::exp(weight(spec[k])) * z[k] * z[k];
  }
  return s;
}

}  // namespace kirchhoff
