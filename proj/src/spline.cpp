#include "planewave/spline.hpp"

#include <algorithm>
#include <cmath>

#include "planewave/error.hpp"

namespace planewave {

namespace {

// Gaussian elimination without pivoting on a band matrix; the not-a-knot rows
// stay inside a bandwidth of two.
std::vector<double> solve_banded(std::vector<std::vector<double>> rows,
                                 std::vector<double> rhs, int bandwidth) {
  const int n = static_cast<int>(rhs.size());
  // rows[i] holds entries for columns i-bandwidth .. i+bandwidth.
  auto at = [&](int i, int j) -> double& { return rows[i][j - i + bandwidth]; };
  for (int k = 0; k < n; ++k) {
    const double pivot = at(k, k);
    require(std::abs(pivot) > 0.0, ErrorCode::kSingular, "spline system is singular");
    for (int i = k + 1; i <= std::min(n - 1, k + bandwidth); ++i) {
      const double factor = at(i, k) / pivot;
      if (factor == 0.0) continue;
      for (int j = k; j <= std::min(n - 1, k + bandwidth); ++j) at(i, j) -= factor * at(k, j);
      rhs[i] -= factor * rhs[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j <= std::min(n - 1, i + bandwidth); ++j) s -= at(i, j) * x[j];
    x[i] = s / at(i, i);
  }
  return x;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  require(knots_.size() == values_.size() && !knots_.empty(), ErrorCode::kInvalidArgument,
          "spline needs matching non-empty knots and values");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    require(knots_[i] > knots_[i - 1], ErrorCode::kInvalidArgument,
            "spline knots must be strictly increasing");
  const int n = static_cast<int>(knots_.size());
  second_.assign(n, 0.0);
  if (n < 3) return;

  std::vector<double> h(n - 1);
  for (int i = 0; i < n - 1; ++i) h[i] = knots_[i + 1] - knots_[i];
  const int bw = 2;
  std::vector<std::vector<double>> rows(n, std::vector<double>(2 * bw + 1, 0.0));
  std::vector<double> rhs(n, 0.0);
  auto set = [&](int i, int j, double v) { rows[i][j - i + bw] = v; };

  for (int i = 1; i < n - 1; ++i) {
    set(i, i - 1, h[i - 1]);
    set(i, i, 2.0 * (h[i - 1] + h[i]));
    set(i, i + 1, h[i]);
    rhs[i] = 6.0 * ((values_[i + 1] - values_[i]) / h[i] - (values_[i] - values_[i - 1]) / h[i - 1]);
  }
  if (n == 3) {
    // Natural ends.
    set(0, 0, 1.0);
    set(n - 1, n - 1, 1.0);
  } else {
    // Not-a-knot: third derivative continuous across the second and the
    // penultimate knot.
    set(0, 0, h[1]);
    set(0, 1, -(h[0] + h[1]));
    set(0, 2, h[0]);
    set(n - 1, n - 3, h[n - 2]);
    set(n - 1, n - 2, -(h[n - 3] + h[n - 2]));
    set(n - 1, n - 1, h[n - 3]);
  }
  second_ = solve_banded(std::move(rows), std::move(rhs), bw);
}

double CubicSpline::piece(double u, int order) const {
  const int n = static_cast<int>(knots_.size());
  if (n == 1) return order == 0 ? values_[0] : 0.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  int i = static_cast<int>(it - knots_.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - u) / h;
  const double b = (u - knots_[i]) / h;
  const double m0 = second_[i], m1 = second_[i + 1];
  const double y0 = values_[i], y1 = values_[i + 1];
  switch (order) {
    case 0:
      return a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
    case 1:
      return (y1 - y0) / h + (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
    case 2:
      return a * m0 + b * m1;
    default:
      return (m1 - m0) / h;
  }
}

double CubicSpline::eval(double u, int order) const {
  require(order >= 0 && order <= 3, ErrorCode::kInvalidArgument, "derivative order must be 0..3");
  require(u >= knots_.front() && u <= knots_.back(), ErrorCode::kOutOfDomain,
          "spline evaluated outside its knots");
  if (order < 3) return piece(u, order);
  if (knots_.size() < 2) return 0.0;
  const double span = knots_.back() - knots_.front();
  const double step = std::min(1e-4, 0.25 * span);
  const double lo = std::max(knots_.front(), u - step);
  const double hi = std::min(knots_.back(), u + step);
  return (piece(hi, 2) - piece(lo, 2)) / (hi - lo);
}

}  // namespace planewave
