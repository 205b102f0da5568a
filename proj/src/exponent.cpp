#include "subdiff/exponent.hpp"

#include <cmath>
#include <utility>

#include "subdiff/errors.hpp"

namespace subdiff {

namespace {
constexpr int kValidationSamples = 2049;
constexpr double kMonotoneSlack = 1e-12;
}  // namespace

VariableExponent::VariableExponent(std::function<double(double)> eval,
                                   double sup_bound, double horizon,
                                   Monotonicity hint,
                                   std::function<double(double)> derivative)
    : eval_(std::move(eval)),
      sup_bound_(sup_bound),
      horizon_(horizon),
      hint_(hint),
      derivative_(std::move(derivative)) {
  if (!eval_) throw ValidationError("VariableExponent: empty evaluator");
  if (!(horizon_ > 0.0))
    throw ValidationError("VariableExponent: horizon must be positive");
  if (!(sup_bound_ >= 0.0 && sup_bound_ < 1.0))
    throw ValidationError("VariableExponent: sup bound must lie in [0,1)");

  double prev = 0.0;
  for (int i = 0; i < kValidationSamples; ++i) {
    const double t = horizon_ * static_cast<double>(i) / (kValidationSamples - 1);
    const double a = eval_(t);
    if (!std::isfinite(a) || a < -kMonotoneSlack || a > sup_bound_ + kMonotoneSlack)
      throw ValidationError("VariableExponent: sampled value " +
                            std::to_string(a) + " at t=" + std::to_string(t) +
                            " outside [0, sup_bound]");
    if (i > 0) {
      if (hint_ == Monotonicity::increasing && a < prev - kMonotoneSlack)
        throw ValidationError("VariableExponent: increasing hint violated near t=" +
                              std::to_string(t));
      if (hint_ == Monotonicity::decreasing && a > prev + kMonotoneSlack)
        throw ValidationError("VariableExponent: decreasing hint violated near t=" +
                              std::to_string(t));
    }
    prev = a;
  }
}

double VariableExponent::derivative(double t) const {
  if (!derivative_)
    throw ValidationError("VariableExponent: derivative not provided");
  return derivative_(t);
}

VariableExponent VariableExponent::constant(double alpha, double horizon) {
  return VariableExponent([alpha](double) { return alpha; }, alpha, horizon,
                          Monotonicity::none, [](double) { return 0.0; });
}

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    default: return "none";
  }
}

}  // namespace subdiff
