#include "planewave/point_map.hpp"

#include <cmath>
#include <random>

#include "planewave/error.hpp"

namespace planewave {

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kIdentity: return "identity";
    case MapKind::kBrinkmannization: return "brinkmannization";
    case MapKind::kRosenization: return "rosenization";
    case MapKind::kRotationGauge: return "rotation_gauge";
    case MapKind::kAffineU: return "affine_u";
    case MapKind::kHeisenberg: return "heisenberg";
    case MapKind::kDilationScale: return "dilation_scale";
    case MapKind::kConformalReparam: return "conformal_reparam";
    case MapKind::kLinear: return "linear";
    case MapKind::kRosenTransform: return "rosen_transform";
    case MapKind::kConformalFactorization: return "conformal_factorization";
    case MapKind::kComposed: return "composed";
  }
  return "unknown";
}

namespace {

Vec pack(const SpacetimePoint& p) {
  Vec y(p.x.size() + 2);
  y << p.u, p.v, p.x;
  return y;
}

SpacetimePoint unpack(const Vec& y) {
  return {y(0), y(1), y.tail(y.size() - 2)};
}

}  // namespace

PointMap::PointMap(MapKind kind, int n, Forward forward, Jacobian jacobian,
                   MapParameters parameters)
    : kind_(kind),
      n_(n),
      forward_(std::move(forward)),
      jacobian_(std::move(jacobian)),
      parameters_(std::move(parameters)) {}

Mat PointMap::jacobian(const SpacetimePoint& point) const {
  return jacobian_ ? jacobian_(point) : finite_difference_jacobian(point);
}

Mat PointMap::finite_difference_jacobian(const SpacetimePoint& point, double step) const {
  const Vec base = pack(point);
  const auto m = base.size();
  Mat j(m, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    Vec plus = base, minus = base;
    plus(c) += step;
    minus(c) -= step;
    j.col(c) = (pack(forward_(unpack(plus))) - pack(forward_(unpack(minus)))) / (2.0 * step);
  }
  return j;
}

PointMap PointMap::identity(int n) {
  return PointMap(
      MapKind::kIdentity, n, [](const SpacetimePoint& p) { return p; },
      [n](const SpacetimePoint&) { return Mat(Mat::Identity(n + 2, n + 2)); });
}

PointMap PointMap::affine_u(double a, double u0, const Mat& gamma) {
  require(a != 0.0, ErrorCode::kInvalidArgument, "affine scale must be nonzero");
  const int n = static_cast<int>(gamma.rows());
  Mat j = Mat::Zero(n + 2, n + 2);
  j(0, 0) = a;
  j(1, 1) = 1.0 / a;
  j.bottomRightCorner(n, n) = gamma;
  MapParameters params{{{"a", a}, {"u0", u0}}, {{"gamma", gamma}}};
  return PointMap(
      MapKind::kAffineU, n,
      [a, u0, gamma](const SpacetimePoint& p) {
        return SpacetimePoint{a * (p.u - u0), p.v / a, gamma * p.x};
      },
      [j](const SpacetimePoint&) { return j; }, std::move(params));
}

PointMap PointMap::linear(double c, double d, const Mat& A) {
  require(c != 0.0, ErrorCode::kInvalidArgument, "u scale must be nonzero");
  const int n = static_cast<int>(A.rows());
  Mat j = Mat::Zero(n + 2, n + 2);
  j(0, 0) = c;
  j(1, 1) = 1.0 / c;
  j.bottomRightCorner(n, n) = A;
  MapParameters params{{{"c", c}, {"d", d}}, {{"A", A}}};
  return PointMap(
      MapKind::kLinear, n,
      [c, d, A](const SpacetimePoint& p) { return SpacetimePoint{c * p.u + d, p.v / c, A * p.x}; },
      [j](const SpacetimePoint&) { return j; }, std::move(params));
}

PointMap PointMap::dilation_scale(double t) {
  MapParameters params{{{"t", t}}, {}};
  const double s = std::exp(t);
  return PointMap(
      MapKind::kDilationScale, -1,
      [s](const SpacetimePoint& p) { return SpacetimePoint{p.u, s * s * p.v, s * p.x}; },
      [s](const SpacetimePoint& p) {
        const auto n = p.x.size();
        Mat j = Mat::Identity(n + 2, n + 2);
        j(1, 1) = s * s;
        j.bottomRightCorner(n, n) *= s;
        return j;
      },
      std::move(params));
}

PointMap PointMap::rotation_gauge(const Mat& omega) {
  require(is_skew(omega), ErrorCode::kNotSymmetric, "rotation generator must be skew");
  const int n = static_cast<int>(omega.rows());
  MapParameters params{{}, {{"omega", omega}}};
  return PointMap(
      MapKind::kRotationGauge, n,
      [omega](const SpacetimePoint& p) {
        return SpacetimePoint{p.u, p.v, expm(-p.u * omega) * p.x};
      },
      [omega, n](const SpacetimePoint& p) {
        const Mat r = expm(-p.u * omega);
        Mat j = Mat::Zero(n + 2, n + 2);
        j(0, 0) = j(1, 1) = 1.0;
        j.block(2, 0, n, 1) = -omega * r * p.x;
        j.bottomRightCorner(n, n) = r;
        return j;
      },
      std::move(params));
}

PointMap PointMap::heisenberg(const JacobiSolution& q) {
  const int n = static_cast<int>(q.q(q.solution().base_point()).size());
  return PointMap(
      MapKind::kHeisenberg, n,
      [q](const SpacetimePoint& p) {
        const Vec qq = q.q(p.u), qd = q.qdot(p.u);
        return SpacetimePoint{p.u, p.v + p.x.dot(qd) + 0.5 * qq.dot(qd), p.x + qq};
      },
      {});
}

PointMap compose(const PointMap& outer, const PointMap& inner) {
  const int n = inner.dim() >= 0 ? inner.dim() : outer.dim();
  return PointMap(
      MapKind::kComposed, n,
      [outer, inner](const SpacetimePoint& p) { return outer.forward(inner.forward(p)); },
      [outer, inner](const SpacetimePoint& p) {
        return Mat(outer.jacobian(inner.forward(p)) * inner.jacobian(p));
      });
}

double pullback_residual(const PointMap& map, const PlaneWaveMetric& source,
                         const PlaneWaveMetric& target, const std::vector<SpacetimePoint>& points,
                         const ConformalFactor& factor) {
  double worst = 0.0;
  for (const auto& p : points) {
    const SpacetimePoint image = map.forward(p);
    const Mat j = map.jacobian(p);
    const Mat pulled = j.transpose() * metric_components(target, image) * j;
    const double c = factor ? factor(p) : 1.0;
    worst = std::max(worst, max_abs(pulled - c * metric_components(source, p)));
  }
  return worst;
}

std::vector<SpacetimePoint> sample_points(const Interval& u_range, int n, int count,
                                          std::uint64_t seed, double spread) {
  const Interval r = u_range.clipped();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uu(r.lo, r.hi), box(-spread, spread);
  std::vector<SpacetimePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SpacetimePoint p;
    p.u = uu(rng);
    p.v = box(rng);
    p.x = Vec(n);
    for (int k = 0; k < n; ++k) p.x(k) = box(rng);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace planewave
