#include "planewave/metric.hpp"

#include <cmath>

#include "planewave/error.hpp"

namespace planewave {

BrinkmannMetric BrinkmannMetric::make(MatrixProfile p) {
  require(p.symmetry() == Symmetry::kSymmetric, ErrorCode::kNotSymmetric,
          "Brinkmann profile must be symmetric");
  return {std::move(p)};
}

RosenMetric RosenMetric::make(MatrixProfile h, std::vector<double> singular_set, int samples) {
  require(h.symmetry() == Symmetry::kSymmetric, ErrorCode::kNotSymmetric,
          "Rosen profile must be symmetric");
  for (double s : singular_set)
    require(h.domain().contains(s), ErrorCode::kOutOfDomain, "singular point outside the domain");
  for (double u : h.sample_grid(samples)) {
    bool near_singular = false;
    for (double s : singular_set) near_singular = near_singular || std::abs(u - s) < 1e-6;
    if (near_singular) continue;
    require(min_eigenvalue(h.eval(u)) > 0.0, ErrorCode::kPrecondition,
            "Rosen profile is not positive definite at u = " + std::to_string(u));
  }
  return {std::move(h), std::move(singular_set)};
}

AlekseevskyMetric AlekseevskyMetric::make(MatrixProfile p, MatrixProfile omega) {
  require(p.symmetry() == Symmetry::kSymmetric, ErrorCode::kNotSymmetric,
          "Alekseevsky p must be symmetric");
  require(omega.symmetry() == Symmetry::kSkew, ErrorCode::kNotSymmetric,
          "Alekseevsky omega must be skew");
  require(p.dim() == omega.dim(), ErrorCode::kInvalidArgument,
          "Alekseevsky profiles must share one dimension");
  return {std::move(p), std::move(omega)};
}

int dimension(const PlaneWaveMetric& metric) {
  return std::visit([](const auto& m) { return m.n(); }, metric);
}

Interval domain(const PlaneWaveMetric& metric) {
  return std::visit([](const auto& m) { return Interval(m.domain()); }, metric);
}

Mat metric_components(const PlaneWaveMetric& metric, const SpacetimePoint& point) {
  const int n = dimension(metric);
  require(point.x.size() == n, ErrorCode::kInvalidArgument, "point dimension mismatch");
  require(domain(metric).contains(point.u), ErrorCode::kOutOfDomain,
          "point outside the metric domain");
  Mat g = Mat::Zero(n + 2, n + 2);
  g(0, 1) = g(1, 0) = 1.0;
  const Vec& x = point.x;
  if (const auto* b = std::get_if<BrinkmannMetric>(&metric)) {
    g(0, 0) = x.dot(b->p.eval(point.u) * x);
    g.bottomRightCorner(n, n) = -Mat::Identity(n, n);
  } else if (const auto* r = std::get_if<RosenMetric>(&metric)) {
    g.bottomRightCorner(n, n) = -r->h.eval(point.u);
  } else {
    const auto& a = std::get<AlekseevskyMetric>(metric);
    g(0, 0) = x.dot(a.p.eval(point.u) * x);
    const Vec cross = -(x.transpose() * a.omega.eval(point.u)).transpose();
    g.block(0, 2, 1, n) = cross.transpose();
    g.block(2, 0, n, 1) = cross;
    g.bottomRightCorner(n, n) = -Mat::Identity(n, n);
  }
  return g;
}

bool is_vacuum(const BrinkmannMetric& metric, const PredicateOptions& opts) {
  for (double u : metric.p.sample_grid(opts.samples))
    if (std::abs(metric.p.eval(u).trace()) > opts.tol) return false;
  return true;
}

bool is_conformally_curved(const BrinkmannMetric& metric, const PredicateOptions& opts) {
  if (metric.n() == 1) return false;
  for (double u : metric.p.sample_grid(opts.samples))
    if (trace_decompose(metric.p.eval(u)).trace_free.norm() > opts.tol) return true;
  return false;
}

bool is_flat(const BrinkmannMetric& metric, const PredicateOptions& opts) {
  for (double u : metric.p.sample_grid(opts.samples))
    if (metric.p.eval(u).norm() > opts.tol) return false;
  return true;
}

}  // namespace planewave
