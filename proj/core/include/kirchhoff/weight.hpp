#pragma once

#include <functional>
#include <string_view>

namespace kirchhoff {

enum class WeightFamily { Zero, Linear, QuasiAnalytic, Custom };

/// Regularity class selected by a weight. Quasi-analyticity means the
/// improper integral of phi(s)/s^2 diverges; it is decided per builtin family,
/// never numerically.
enum class WeightClass { Sobolev, Analytic, QuasiAnalytic, Unclassified };

std::string_view to_string(WeightFamily family) noexcept;
std::string_view to_string(WeightClass cls) noexcept;

/// Increasing weight phi on [0, inf) with phi(0) = 0.
///
/// Builtin families are zero, linear (r0 * s) and the classical
/// quasi-analytic weight s / log(2 + s). Custom weights are accepted only if
/// they vanish at 0 and are strictly increasing on a validation grid.
class Weight {
 public:
  static Weight zero();
  static Weight linear(double r0);
  static Weight quasi_analytic();
  static Weight custom(std::function<double(double)> phi, double check_range = 100.0,
                       WeightClass declared = WeightClass::Unclassified);

  [[nodiscard]] double operator()(double sigma) const;

  [[nodiscard]] WeightFamily family() const noexcept { return family_; }
  [[nodiscard]] double r0() const noexcept { return r0_; }
  [[nodiscard]] WeightClass classify() const noexcept;

 private:
  Weight(WeightFamily family, double r0, std::function<double(double)> phi, WeightClass declared)
      : family_(family), r0_(r0), phi_(std::move(phi)), declared_(declared) {}

  WeightFamily family_;
  double r0_ = 0.0;
  std::function<double(double)> phi_;
  WeightClass declared_ = WeightClass::Unclassified;
};

/// Returns s with |phi(s) - y| <= 1e-12 * max(1, y).
[[nodiscard]] double phi_inverse(const Weight& w, double y);

/// Grid-certified constant c2 with phi^{-1}(y) <= c2 * y * log(2 + y) on
/// [1e-6, y_max], inflated by 5%. Only defined for the quasi-analytic family.
[[nodiscard]] double inv_phi_majorant_c2(const Weight& w, double y_max);

}  // namespace kirchhoff
