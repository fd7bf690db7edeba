#include "parker/spline.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "parker/error.hpp"

namespace parker {

namespace {
void disable_gsl_abort() {
  static std::once_flag flag;
  std::call_once(flag, [] { gsl_set_error_handler_off(); });
}
}  // namespace

void CubicSpline::InterpDeleter::operator()(gsl_interp* p) const { gsl_interp_free(p); }

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  disable_gsl_abort();
  if (x_.size() != y_.size()) fail(Errc::InvalidArgument, "spline abscissa/ordinate size mismatch");
  if (x_.size() < 2) fail(Errc::InsufficientData, "spline needs at least two samples");
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) {
      fail(Errc::NonMonotoneAbscissa,
           "abscissa not strictly increasing at row " + std::to_string(i + 1));
    }
  }
  const gsl_interp_type* type = x_.size() >= 3 ? gsl_interp_cspline : gsl_interp_linear;
  interp_.reset(gsl_interp_alloc(type, x_.size()));
  if (!interp_ || gsl_interp_init(interp_.get(), x_.data(), y_.data(), x_.size()) != GSL_SUCCESS) {
    fail(Errc::InvalidArgument, "spline initialisation failed");
  }
}

double CubicSpline::clamp_to_range(double x) const {
  // Grid endpoints computed in floating point may sit an ulp outside the table.
  const double slack = 1e-12 * std::max(1.0, x_.back() - x_.front());
  if (x < x_.front() - slack || x > x_.back() + slack) {
    fail(Errc::InvalidArgument, "spline evaluated outside its table range at x=" + std::to_string(x));
  }
  return std::clamp(x, x_.front(), x_.back());
}

double CubicSpline::value(double x) const {
  return gsl_interp_eval(interp_.get(), x_.data(), y_.data(), clamp_to_range(x), nullptr);
}

double CubicSpline::derivative(double x) const {
  return gsl_interp_eval_deriv(interp_.get(), x_.data(), y_.data(), clamp_to_range(x), nullptr);
}

}  // namespace parker
