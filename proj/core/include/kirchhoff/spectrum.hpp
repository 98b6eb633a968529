#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "kirchhoff/weight.hpp"

namespace kirchhoff {

/// Coordinates <z, e_k> of a vector in the eigenbasis of A.
class ModeVector {
 public:
  ModeVector() = default;
  explicit ModeVector(std::size_t n) : c_(n, 0.0) {}
  explicit ModeVector(std::vector<double> coords) : c_(std::move(coords)) {}
  ModeVector(std::initializer_list<double> coords) : c_(coords) {}

  [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }

  [[nodiscard]] std::span<const double> coords() const noexcept { return c_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return c_; }
  [[nodiscard]] auto begin() const noexcept { return c_.begin(); }
  [[nodiscard]] auto end() const noexcept { return c_.end(); }

  /// |z|^2 in H (Parseval on the truncation).
  [[nodiscard]] double norm_sq() const noexcept;

  ModeVector& operator+=(const ModeVector& other);
  ModeVector& operator-=(const ModeVector& other);
  ModeVector& operator*=(double s) noexcept;

  friend ModeVector operator+(ModeVector a, const ModeVector& b) { return a += b; }
  friend ModeVector operator-(ModeVector a, const ModeVector& b) { return a -= b; }
  friend ModeVector operator*(double s, ModeVector a) { return a *= s; }
  friend bool operator==(const ModeVector&, const ModeVector&) = default;

 private:
  std::vector<double> c_;
};

/// Eigenvalue sequence of A, with A e_k = lambda_k^2 e_k. Finite, nonempty,
/// nonnegative and sorted nondecreasing.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> lambdas);

  /// lambda_k = k, k = 1..n (string-like).
  static Spectrum linear(std::size_t n);
  /// lambda_k = sqrt(k), k = 1..n.
  static Spectrum square_root(std::size_t n);
  /// lambda_k = 2^k, k = 1..n.
  static Spectrum lacunary(std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return lambdas_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return lambdas_[k]; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return lambdas_; }
  [[nodiscard]] double max() const noexcept { return lambdas_.back(); }

  /// lambda_k^{2 alpha}, the eigenvalue of A^alpha on e_k (0^0 = 1).
  [[nodiscard]] double power_weight(std::size_t k, double alpha) const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> lambdas_;
};

struct FrequencySplit {
  double cutoff = 0.0;
  ModeVector low;   ///< modes with lambda_k <= cutoff
  ModeVector high;  ///< modes with lambda_k > cutoff
};

void require_same_length(const Spectrum& spec, const ModeVector& z);

/// A^alpha z in coordinates.
[[nodiscard]] ModeVector apply_power(const Spectrum& spec, const ModeVector& z, double alpha);

/// |A^alpha z|^2 = sum lambda_k^{4 alpha} z_k^2.
[[nodiscard]] double power_norm_sq(const Spectrum& spec, const ModeVector& z, double alpha);

[[nodiscard]] FrequencySplit split(const Spectrum& spec, const ModeVector& z, double cutoff);

/// sum lambda_k^{4 alpha} exp(phi(lambda_k)) z_k^2
[[nodiscard]] double gevrey_norm_sq(const Spectrum& spec, const ModeVector& z, const Weight& weight,
                                    double alpha);

}  // namespace kirchhoff
