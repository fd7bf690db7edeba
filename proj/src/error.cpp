#include "parker/error.hpp"

namespace parker {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateInterval: return "DegenerateInterval";
    case Errc::NonPositiveDensity: return "NonPositiveDensity";
    case Errc::ParseError: return "ParseError";
    case Errc::NonMonotoneAbscissa: return "NonMonotoneAbscissa";
    case Errc::DegenerateField: return "DegenerateField";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::ZeroXi1: return "ZeroXi1";
    case Errc::ZeroXi2: return "ZeroXi2";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::InvalidMode: return "InvalidMode";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::ZeroAmplitude: return "ZeroAmplitude";
    case Errc::NegativeRadicand: return "NegativeRadicand";
    case Errc::BisectionFailure: return "BisectionFailure";
    case Errc::BracketFailure: return "BracketFailure";
    case Errc::EigenFailure: return "EigenFailure";
    case Errc::StepTooLarge: return "StepTooLarge";
  }
  return "Unknown";
}

bool is_numerical(Errc code) {
  switch (code) {
    case Errc::NegativeRadicand:
    case Errc::BisectionFailure:
    case Errc::BracketFailure:
    case Errc::EigenFailure:
    case Errc::StepTooLarge:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace parker
