#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "kirchhoff/weight.hpp"

namespace kirchhoff {

enum class NonlinearityFamily { Constant, Affine, Custom };

std::string_view to_string(NonlinearityFamily family) noexcept;

/// The coefficient m of the Kirchhoff equation together with its derivative
/// and primitive M(s) = int_0^s m. Construction spot-checks m >= nu0 on a grid.
class Nonlinearity {
 public:
  using Fn = std::function<double(double)>;

  /// m(s) = nu0.
  static Nonlinearity constant(double nu0);
  /// m(s) = nu0 + slope * s, slope >= 0.
  static Nonlinearity affine(double nu0, double slope = 1.0);
  /// User supplied C^1 function. Without m_prime, central differences with
  /// step 1e-6 * max(1, s) are used.
  static Nonlinearity custom(Fn m, std::optional<Fn> m_prime, double nu0,
                             double check_range = 100.0);

  [[nodiscard]] double value(double sigma) const;
  [[nodiscard]] double slope(double sigma) const;
  [[nodiscard]] double primitive(double sigma) const;

  [[nodiscard]] double nu0() const noexcept { return nu0_; }
  [[nodiscard]] NonlinearityFamily family() const noexcept { return family_; }
  /// Affine slope; zero for the constant family.
  [[nodiscard]] double affine_slope() const noexcept { return slope_; }

 private:
  Nonlinearity(NonlinearityFamily family, double nu0, double slope, Fn m, std::optional<Fn> mp)
      : family_(family), nu0_(nu0), slope_(slope), m_(std::move(m)), m_prime_(std::move(mp)) {}

  NonlinearityFamily family_;
  double nu0_;
  double slope_ = 0.0;
  Fn m_;
  std::optional<Fn> m_prime_;
};

/// Maximum of f over [lo, hi]: 4096-point grid followed by golden-section
/// refinement around the best node.
[[nodiscard]] double range_max(const std::function<double(double)>& f, double lo, double hi);

/// C0 = max m on [0, r0_sq].
[[nodiscard]] double max_coefficient(const Nonlinearity& nl, double r0_sq);
/// L0 = max |m'| on [0, r0_sq].
[[nodiscard]] double max_slope(const Nonlinearity& nl, double r0_sq);

}  // namespace kirchhoff
