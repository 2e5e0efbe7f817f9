#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace planewave {

/// A real interval with possibly infinite ends. Finite ends are admitted for
/// evaluation, so sampled profiles can be evaluated on their outer knots.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval real_line() { return {}; }
  static Interval make(double lo, double hi);

  bool contains(double u) const { return u >= lo && u <= hi; }
  bool is_bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
  double midpoint() const;
  Interval intersect(const Interval& other) const;

  /// Finite window used when sampling; infinite ends are clipped to `half_width`.
  Interval clipped(double half_width = 10.0) const;

  /// `count` uniform points on the (clipped) interval, endpoints included.
  std::vector<double> uniform_grid(int count) const;

  std::string describe() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace planewave
