#pragma once

#include <variant>
#include <vector>

#include "planewave/profile.hpp"

namespace planewave {

struct SpacetimePoint {
  double u = 0.0;
  double v = 0.0;
  Vec x;
};

/// 2 du dv + xᵀp(u)x du² − dxᵀdx
struct BrinkmannMetric {
  MatrixProfile p;

  static BrinkmannMetric make(MatrixProfile p);
  int n() const { return p.dim(); }
  const Interval& domain() const { return p.domain(); }
};

/// 2 du dv − dxᵀh(u)dx; h positive definite away from the declared singular set.
struct RosenMetric {
  MatrixProfile h;
  std::vector<double> singular_set;

  static RosenMetric make(MatrixProfile h, std::vector<double> singular_set = {},
                          int samples = 1001);
  int n() const { return h.dim(); }
  const Interval& domain() const { return h.domain(); }
};

/// du α − dxᵀdx with α = 2dv + xᵀp(u)x du − 2xᵀω(u)dx
struct AlekseevskyMetric {
  MatrixProfile p;
  MatrixProfile omega;

  static AlekseevskyMetric make(MatrixProfile p, MatrixProfile omega);
  int n() const { return p.dim(); }
  Interval domain() const { return p.domain().intersect(omega.domain()); }
};

using PlaneWaveMetric = std::variant<BrinkmannMetric, RosenMetric, AlekseevskyMetric>;

int dimension(const PlaneWaveMetric& metric);
Interval domain(const PlaneWaveMetric& metric);

/// Component matrix in coordinate order (u, v, x¹..xⁿ).
Mat metric_components(const PlaneWaveMetric& metric, const SpacetimePoint& point);

struct PredicateOptions {
  double tol = 1e-10;
  int samples = 1001;
};

bool is_vacuum(const BrinkmannMetric& metric, const PredicateOptions& opts = {});
bool is_conformally_curved(const BrinkmannMetric& metric, const PredicateOptions& opts = {});
bool is_flat(const BrinkmannMetric& metric, const PredicateOptions& opts = {});

}  // namespace planewave
