#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parker {

enum class Errc {
  // input / validation failures
  InvalidArgument,
  DegenerateInterval,
  NonPositiveDensity,
  ParseError,
  NonMonotoneAbscissa,
  DegenerateField,
  ZeroDenominator,
  ZeroXi1,
  ZeroXi2,
  ZeroVector,
  InvalidMode,
  InsufficientData,
  ZeroAmplitude,
  // numerical failures
  NegativeRadicand,
  BisectionFailure,
  BracketFailure,
  EigenFailure,
  StepTooLarge,
};

std::string_view to_string(Errc code);

/// True for codes that signal a numerical breakdown rather than bad input.
bool is_numerical(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace parker
