#include "kirchhoff/error.hpp"

namespace kirchhoff {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NegativePowerOnKernel: return "NegativePowerOnKernel";
    case Errc::NonpositiveCutoff: return "NonpositiveCutoff";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidSpectrum: return "InvalidSpectrum";
    case Errc::NegativeSigma: return "NegativeSigma";
    case Errc::HyperbolicityViolated: return "HyperbolicityViolated";
    case Errc::NotStrictlyIncreasing: return "NotStrictlyIncreasing";
    case Errc::ZeroWeightNotInvertible: return "ZeroWeightNotInvertible";
    case Errc::WrongFamily: return "WrongFamily";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonFiniteState: return "NonFiniteState";
    case Errc::DriftExceeded: return "DriftExceeded";
    case Errc::CoefficientBoundViolated: return "CoefficientBoundViolated";
    case Errc::EmptyTrajectory: return "EmptyTrajectory";
    case Errc::MissingField: return "MissingField";
    case Errc::GapTooLarge: return "GapTooLarge";
    case Errc::LambdaConditionFails: return "LambdaConditionFails";
    case Errc::EpsilonTooLarge: return "EpsilonTooLarge";
    case Errc::ZeroE: return "ZeroE";
    case Errc::InfiniteKb: return "InfiniteKb";
    case Errc::IncompatibleWeight: return "IncompatibleWeight";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace kirchhoff
