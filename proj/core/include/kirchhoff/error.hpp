#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kirchhoff {

enum class Errc {
  NegativePowerOnKernel,
  NonpositiveCutoff,
  LengthMismatch,
  InvalidSpectrum,
  NegativeSigma,
  HyperbolicityViolated,
  NotStrictlyIncreasing,
  ZeroWeightNotInvertible,
  WrongFamily,
  InvalidArgument,
  NonFiniteState,
  DriftExceeded,
  CoefficientBoundViolated,
  EmptyTrajectory,
  MissingField,
  GapTooLarge,
  LambdaConditionFails,
  EpsilonTooLarge,
  ZeroE,
  InfiniteKb,
  IncompatibleWeight,
  HypothesisFailed,
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc codes so that
/// callers (and tests) can branch on the kind of failure without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace kirchhoff
