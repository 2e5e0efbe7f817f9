#include "planewave/interval.hpp"

#include <algorithm>
#include <sstream>

#include "planewave/error.hpp"

namespace planewave {

Interval Interval::make(double lo, double hi) {
  require(!std::isnan(lo) && !std::isnan(hi) && lo < hi, ErrorCode::kInvalidArgument,
          "interval needs lo < hi");
  return {lo, hi};
}

double Interval::midpoint() const {
  if (is_bounded()) return 0.5 * (lo + hi);
  if (contains(0.0)) return 0.0;
  return std::isfinite(lo) ? lo + 1.0 : hi - 1.0;
}

Interval Interval::intersect(const Interval& other) const {
  return make(std::max(lo, other.lo), std::min(hi, other.hi));
}

Interval Interval::clipped(double half_width) const {
  if (is_bounded()) return *this;
  const double centre = std::isfinite(lo) ? lo + half_width : (std::isfinite(hi) ? hi - half_width : 0.0);
  return {std::max(lo, centre - half_width), std::min(hi, centre + half_width)};
}

std::vector<double> Interval::uniform_grid(int count) const {
  const Interval w = clipped();
  std::vector<double> grid;
  if (count <= 1) return {w.midpoint()};
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid.push_back(w.lo + (w.hi - w.lo) * i / (count - 1));
  grid.back() = w.hi;
  return grid;
}

std::string Interval::describe() const {
  std::ostringstream os;
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace planewave
