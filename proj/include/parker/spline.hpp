#pragma once

#include <memory>
#include <span>
#include <vector>

#include <gsl/gsl_interp.h>

namespace parker {

/// Natural cubic spline through (x, y) samples (linear for two samples).
/// Immutable after construction; evaluation is thread-safe.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> x, std::span<const double> y);

  double value(double x) const;
  double derivative(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& ordinates() const { return y_; }

 private:
  struct InterpDeleter {
    void operator()(gsl_interp* p) const;
  };
  double clamp_to_range(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::unique_ptr<gsl_interp, InterpDeleter> interp_;
};

}  // namespace parker
