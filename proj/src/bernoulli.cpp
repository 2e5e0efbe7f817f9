#include "planewave/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "planewave/error.hpp"

namespace planewave {

ShiftSequence::ShiftSequence(int lo, std::vector<double> values)
    : lo_(lo), values_(std::move(values)) {
  require(!values_.empty(), ErrorCode::kInvalidArgument, "shift sequence window is empty");
  for (double v : values_)
    require(v >= 0.0 && v <= 0.5, ErrorCode::kInvalidArgument,
            "shift sequence values must lie in [0, 1/2]");
}

ShiftSequence ShiftSequence::centered(std::vector<double> values) {
  require(values.size() % 2 == 1, ErrorCode::kInvalidArgument,
          "a centered window needs an odd number of values");
  const int half = static_cast<int>(values.size() / 2);
  return ShiftSequence(-half, std::move(values));
}

int ShiftSequence::half_width() const { return std::max({std::abs(lo()), std::abs(hi()), 1}); }

double ShiftSequence::at(int index) const {
  if (index < lo() || index > hi()) return 0.0;
  return values_[static_cast<std::size_t>(index - lo_)];
}

double bump_exponent(double a, double u, int order) {
  require(a >= 0.0 && a < 1.0, ErrorCode::kInvalidArgument, "f_a needs 0 <= a < 1");
  require(u > 0.0 && u < 1.0, ErrorCode::kOutOfDomain, "f_a is defined on (0, 1)");
  require(order >= 0 && order <= 3, ErrorCode::kInvalidArgument, "derivative order must be 0..3");
  // Partial fractions: f_a = (1−a)u⁻² + u⁻¹ + (1−u)⁻¹.
  const double s = 1.0 - u;
  switch (order) {
    case 0:
      return (1.0 - a) / (u * u) + 1.0 / u + 1.0 / s;
    case 1:
      return -2.0 * (1.0 - a) / (u * u * u) - 1.0 / (u * u) + 1.0 / (s * s);
    case 2:
      return 6.0 * (1.0 - a) / std::pow(u, 4) + 2.0 / (u * u * u) + 2.0 / (s * s * s);
    default:
      return -24.0 * (1.0 - a) / std::pow(u, 5) - 6.0 / std::pow(u, 4) + 6.0 / std::pow(s, 4);
  }
}

BumpMinimum bump_exponent_minimum(double a) {
  require(a >= 0.0 && a < 1.0, ErrorCode::kInvalidArgument, "f_a needs 0 <= a < 1");
  const double b = std::sqrt(9.0 - 8.0 * a);
  return {(b + 1.0) / (b + 3.0), std::pow(b + 3.0, 3) / (8.0 * (b + 1.0))};
}

double bump(double a, double u, int order) {
  require(a >= 0.0 && a < 1.0, ErrorCode::kInvalidArgument, "g_a needs 0 <= a < 1");
  require(order >= 0 && order <= 3, ErrorCode::kInvalidArgument, "derivative order must be 0..3");
  if (u <= 0.0 || u >= 1.0) return order == 0 ? 1.0 : 0.0;
  const double f = bump_exponent(a, u, 0);
  // Past this point e^{4−f} times any polynomial in f's derivatives underflows.
  if (f > 700.0) return order == 0 ? 1.0 : 0.0;
  const double e = std::exp(4.0 - f);
  if (order == 0) return 1.0 + e;
  const double f1 = bump_exponent(a, u, 1);
  if (order == 1) return -f1 * e;
  const double f2 = bump_exponent(a, u, 2);
  if (order == 2) return (f1 * f1 - f2) * e;
  const double f3 = bump_exponent(a, u, 3);
  return (-f1 * f1 * f1 + 3.0 * f1 * f2 - f3) * e;
}

double family_profile(const ShiftSequence& alpha, double u, int order) {
  const double cell = std::floor(u);
  const double local = u - cell;
  const double factor = bump(alpha.at(static_cast<int>(cell)), local, order);
  return order == 0 ? factor - 1.0 : factor;
}

}  // namespace planewave
