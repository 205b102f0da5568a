#pragma once

#include <functional>
#include <string>

namespace subdiff {

enum class Monotonicity { increasing, decreasing, none };

/// Time-dependent fractional exponent alpha(t) on [0, T] with
/// 0 <= alpha(t) <= alpha_sup < 1.  The sup bound and the optional
/// monotonicity hint are validated against a dense sample at construction.
class VariableExponent {
public:
  VariableExponent(std::function<double(double)> eval, double sup_bound,
                   double horizon, Monotonicity hint = Monotonicity::none,
                   std::function<double(double)> derivative = {});

  double operator()(double t) const { return eval_(t); }
  double sup_bound() const { return sup_bound_; }
  double horizon() const { return horizon_; }
  Monotonicity hint() const { return hint_; }

  bool has_derivative() const { return static_cast<bool>(derivative_); }
  double derivative(double t) const;

  static VariableExponent constant(double alpha, double horizon);

private:
  std::function<double(double)> eval_;
  double sup_bound_;
  double horizon_;
  Monotonicity hint_;
  std::function<double(double)> derivative_;
};

std::string to_string(Monotonicity m);

}  // namespace subdiff
