#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "planewave/metric.hpp"
#include "planewave/ode.hpp"

namespace planewave {

enum class MapKind {
  kIdentity,
  kBrinkmannization,
  kRosenization,
  kRotationGauge,
  kAffineU,
  kHeisenberg,
  kDilationScale,
  kConformalReparam,
  kLinear,
  kRosenTransform,
  kConformalFactorization,
  kComposed,
};

std::string_view to_string(MapKind kind);

/// Closed-form parameters of a map, kept for reports and serialization.
struct MapParameters {
  std::map<std::string, double> scalars;
  std::map<std::string, Mat> matrices;
};

/// A coordinate change between plane-wave charts.
class PointMap {
 public:
  using Forward = std::function<SpacetimePoint(const SpacetimePoint&)>;
  using Jacobian = std::function<Mat(const SpacetimePoint&)>;

  PointMap(MapKind kind, int n, Forward forward, Jacobian jacobian = {},
           MapParameters parameters = {});

  SpacetimePoint forward(const SpacetimePoint& point) const { return forward_(point); }
  /// Analytic when available, otherwise central differences with step 1e−6.
  Mat jacobian(const SpacetimePoint& point) const;
  Mat finite_difference_jacobian(const SpacetimePoint& point, double step = 1e-6) const;
  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }

  MapKind kind() const { return kind_; }
  int dim() const { return n_; }
  const MapParameters& parameters() const { return parameters_; }

  static PointMap identity(int n);
  /// (u, v, x) ↦ (a(u − u0), v/a, γx)
  static PointMap affine_u(double a, double u0, const Mat& gamma);
  /// (u, v, x) ↦ (c u + d, v/c, A x); no metric meaning in general.
  static PointMap linear(double c, double d, const Mat& A);
  /// (u, v, x) ↦ (u, e^{2t}v, e^t x), a homothety with factor e^{2t}.
  static PointMap dilation_scale(double t);
  /// (u, v, X) ↦ (u, v, e^{−uω}X)
  static PointMap rotation_gauge(const Mat& omega);
  /// Time-one flow of X_q: (u, v, x) ↦ (u, v + xᵀq̇ + ½qᵀq̇, x + q).
  static PointMap heisenberg(const JacobiSolution& q);

 private:
  MapKind kind_;
  int n_;
  Forward forward_;
  Jacobian jacobian_;
  MapParameters parameters_;
};

/// outer ∘ inner
PointMap compose(const PointMap& outer, const PointMap& inner);

/// Optional scalar c(point) with φ*Ḡ = c·G.
using ConformalFactor = std::function<double(const SpacetimePoint&)>;

/// max over points of max_ij |(Jᵀ Ḡ(φ(x)) J − c·G(x))_ij|
double pullback_residual(const PointMap& map, const PlaneWaveMetric& source,
                         const PlaneWaveMetric& target, const std::vector<SpacetimePoint>& points,
                         const ConformalFactor& factor = {});

/// Deterministic sample of points with u uniform in `u_range`, v and x uniform in [−spread, spread].
std::vector<SpacetimePoint> sample_points(const Interval& u_range, int n, int count,
                                          std::uint64_t seed, double spread = 1.0);

}  // namespace planewave
