#pragma once

#include <vector>

namespace planewave {

/// Cubic spline interpolant with not-a-knot end conditions (falls back to a
/// natural spline for three knots and to linear/constant below that).
/// Knots must be strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> knots, std::vector<double> values);

  /// Value or derivative of order 0..3. Order 3 is the finite difference of
  /// the spline second derivative (the exact third derivative is only
  /// piecewise constant).
  double eval(double u, int order) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  double piece(double u, int order) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_;  // second derivatives at knots
};

}  // namespace planewave
