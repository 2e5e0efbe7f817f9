#include "planewave/forms.hpp"

#include <algorithm>
#include <cmath>

#include "planewave/error.hpp"

namespace planewave {

namespace {

constexpr int kResidualPoints = 50;
constexpr std::uint64_t kResidualSeed = 20240611;

Interval shrink(const Interval& r, double fraction) {
  const double d = fraction * r.length();
  return {r.lo + d, r.hi - d};
}

double default_base(const Interval& range, const std::vector<double>& singular) {
  double u0 = range.contains(0.0) ? 0.0 : range.midpoint();
  for (double s : singular)
    if (std::abs(u0 - s) < 1e-6) {
      // move to the middle of the regular component to the right
      double next = range.hi;
      for (double t : singular)
        if (t > s) next = std::min(next, t);
      u0 = 0.5 * (s + next);
    }
  return u0;
}

}  // namespace

int dense_sample_count(const Interval& range, const SolverConfig& config) {
  const double steps = std::ceil(range.length() / config.dense_grid_step);
  return std::max(2001, static_cast<int>(steps) + 1);
}

BrinkmannizationResult brinkmannize(const RosenMetric& rosen, std::optional<double> base,
                                    const SolverConfig& config) {
  const MatrixProfile& h = rosen.h;
  const int n = h.dim();
  const Interval range = rosen.domain().clipped();
  const double u0 = base ? *base : default_base(range, rosen.singular_set);
  require(range.contains(u0), ErrorCode::kOutOfDomain, "base point outside the Rosen domain");

  Interval working = range;
  bool cut_lo = false, cut_hi = false;
  for (double s : rosen.singular_set) {
    require(std::abs(s - u0) >= 1e-6, ErrorCode::kPrecondition, "base point is a singular point");
    if (s < u0 && s >= working.lo) working.lo = s, cut_lo = true;
    if (s > u0 && s <= working.hi) working.hi = s, cut_hi = true;
  }
  const double margin = 0.02 * working.length();
  if (cut_lo) working.lo += margin;
  if (cut_hi) working.hi -= margin;

  const Mat h0 = h.eval(u0);
  require(min_eigenvalue(h0) > 0.0, ErrorCode::kPrecondition,
          "h is not positive definite at the base point");

  OdeRhs rhs = [h, n](double u, const Vec& y) {
    const Mat l = unflatten(y, n);
    return flatten(l.transpose().partialPivLu().solve(0.5 * h.eval(u, 1)));
  };
  const OdeSolution sol = integrate(rhs, u0, flatten(spd_sqrt(h0)), working, config);

  std::function<Mat(double, int)> frame = [sol, h, n](double u, int order) -> Mat {
    // Re-impose LᵀL = h: only the rotation part of the integrated frame is kept.
    const Mat root = spd_sqrt(h.eval(u));
    const Mat l = orthogonal_polar_factor(unflatten(sol.eval(u), n) * root.inverse()) * root;
    if (order == 0) return l;
    const auto lt = l.transpose().partialPivLu();
    const Mat ld = lt.solve(0.5 * h.eval(u, 1));
    if (order == 1) return ld;
    require(order == 2, ErrorCode::kInvalidArgument, "frame order must be 0..2");
    return lt.solve(-ld.transpose() * lt.solve(0.5 * h.eval(u, 1)) + 0.5 * h.eval(u, 2));
  };

  const int count = dense_sample_count(working, config);
  std::vector<double> grid = working.uniform_grid(count);
  std::vector<Mat> values;
  values.reserve(grid.size());
  for (double u : grid) {
    const Mat l = frame(u, 0);
    values.push_back(symmetric_part(-frame(u, 2) * l.inverse()));
  }
  BrinkmannMetric metric = BrinkmannMetric::make(MatrixProfile::sampled(grid, std::move(values)));

  PointMap map(
      MapKind::kBrinkmannization, n,
      [frame](const SpacetimePoint& p) {
        const Mat l = frame(p.u, 0), ld = frame(p.u, 1);
        return SpacetimePoint{p.u, p.v + 0.5 * p.x.dot(l.transpose() * ld * p.x), l * p.x};
      },
      [frame, n](const SpacetimePoint& p) {
        const Mat l = frame(p.u, 0), ld = frame(p.u, 1), ldd = frame(p.u, 2);
        const Mat m = symmetric_part(l.transpose() * ld);
        Mat j = Mat::Zero(n + 2, n + 2);
        j(0, 0) = 1.0;
        j(1, 0) = 0.5 * p.x.dot((ld.transpose() * ld + l.transpose() * ldd) * p.x);
        j(1, 1) = 1.0;
        j.block(1, 2, 1, n) = (m * p.x).transpose();
        j.block(2, 0, n, 1) = ld * p.x;
        j.bottomRightCorner(n, n) = l;
        return j;
      });

  BrinkmannizationResult out{metric, map, u0, working, frame, 0.0};
  out.residual = pullback_residual(map, rosen, metric,
                                   sample_points(working, n, kResidualPoints, kResidualSeed));
  return out;
}

RosenizationResult rosenize(const BrinkmannMetric& brinkmann, double u0, std::optional<Mat> S0,
                            const SolverConfig& config) {
  const int n = brinkmann.n();
  const Mat s0 = S0 ? *S0 : Mat::Zero(n, n);
  require(is_symmetric(s0), ErrorCode::kNotSymmetric, "S0 must be symmetric");
  const Interval range = integration_range(brinkmann.domain(), u0);
  const SachsSolution sachs = solve_sachs(brinkmann.p, u0, s0, config, range);
  const Interval validity = sachs.domain();
  const LagrangianMatrix frame =
      solve_jacobi_matrix(brinkmann.p, u0, Mat::Identity(n, n), s0, config, range);

  auto jet = [frame](double u, int order) -> Mat {
    const Mat l = frame.L(u), ld = frame.Ldot(u);
    switch (order) {
      case 0: return l.transpose() * l;
      case 1: return symmetric_part(2.0 * l.transpose() * ld);
      case 2: {
        const Mat ldd = frame.Lddot(u);
        return symmetric_part(2.0 * (ldd.transpose() * l + ld.transpose() * ld));
      }
      default: {
        const Mat ldd = frame.Lddot(u), l3 = frame.L3dot(u);
        return symmetric_part(2.0 * (l3.transpose() * l + 3.0 * ldd.transpose() * ld));
      }
    }
  };
  std::vector<double> singular;
  if (sachs.solution().blowup_below()) singular.push_back(validity.lo);
  if (sachs.solution().blowup_above()) singular.push_back(validity.hi);
  MatrixProfile h = MatrixProfile::callable(n, Symmetry::kSymmetric, validity, jet);
  RosenMetric metric = RosenMetric::make(h, singular);

  PointMap map(
      MapKind::kRosenization, n,
      [frame](const SpacetimePoint& p) {
        const Mat l = frame.L(p.u);
        const Mat s = symmetric_part(frame.Ldot(p.u) * l.inverse());
        return SpacetimePoint{p.u, p.v - 0.5 * p.x.dot(s * p.x), l.partialPivLu().solve(p.x)};
      },
      [frame, p = brinkmann.p, n](const SpacetimePoint& pt) {
        const Mat l = frame.L(pt.u), li = l.inverse(), ld = frame.Ldot(pt.u);
        const Mat s = symmetric_part(ld * li);
        const Mat sd = -p.eval(pt.u) - s * s;
        Mat j = Mat::Zero(n + 2, n + 2);
        j(0, 0) = 1.0;
        j(1, 0) = -0.5 * pt.x.dot(sd * pt.x);
        j(1, 1) = 1.0;
        j.block(1, 2, 1, n) = -(s * pt.x).transpose();
        j.block(2, 0, n, 1) = -li * ld * li * pt.x;
        j.bottomRightCorner(n, n) = li;
        return j;
      });

  RosenizationResult out{metric, map, validity, frame, 0.0};
  const Interval inner = shrink(validity, singular.empty() ? 0.0 : 0.02);
  out.residual = pullback_residual(map, brinkmann, metric,
                                   sample_points(inner, n, kResidualPoints, kResidualSeed));
  return out;
}

namespace {

const Mat* constant_value(const MatrixProfile& profile) {
  const auto* c = std::get_if<profile_kind::Constant>(&profile.variant());
  return c ? &c->value : nullptr;
}

}  // namespace

AlekseevskyToBrinkmann alekseevsky_to_brinkmann(const AlekseevskyMetric& alek) {
  const Mat* p = constant_value(alek.p);
  const Mat* omega = constant_value(alek.omega);
  require(p && omega, ErrorCode::kPrecondition,
          "Alekseevsky conversion needs constant p and omega");
  const int n = alek.n();
  const bool trivial = max_abs(*omega) == 0.0;
  MatrixProfile profile = trivial ? MatrixProfile::constant(*p, Symmetry::kSymmetric)
                                  : MatrixProfile::rotating_constant(*omega, *p - *omega * *omega);
  AlekseevskyToBrinkmann out{BrinkmannMetric::make(profile),
                             trivial ? PointMap::identity(n) : PointMap::rotation_gauge(*omega),
                             0.0};
  out.residual =
      pullback_residual(out.map, alek, out.metric,
                        sample_points(alek.domain().clipped(), n, kResidualPoints, kResidualSeed));
  return out;
}

BrinkmannToAlekseevsky brinkmann_to_alekseevsky(const BrinkmannMetric& brink) {
  const int n = brink.n();
  Mat omega, base;
  if (const auto* r = std::get_if<profile_kind::RotatingConstant>(&brink.p.variant())) {
    omega = r->omega;
    base = r->base;
  } else if (const Mat* c = constant_value(brink.p)) {
    omega = Mat::Zero(n, n);
    base = *c;
  } else {
    fail(ErrorCode::kPrecondition, "profile is not of rotating-constant form");
  }
  const bool trivial = max_abs(omega) == 0.0;
  AlekseevskyMetric metric =
      AlekseevskyMetric::make(MatrixProfile::constant(base + omega * omega, Symmetry::kSymmetric),
                              MatrixProfile::constant(omega, Symmetry::kSkew));
  BrinkmannToAlekseevsky out{metric,
                             trivial ? PointMap::identity(n) : PointMap::rotation_gauge(-omega),
                             0.0};
  out.residual =
      pullback_residual(out.map, brink, metric,
                        sample_points(brink.domain().clipped(), n, kResidualPoints, kResidualSeed));
  return out;
}

ConformalReparamResult conformal_reparam(const MatrixProfile& p, const ScalarProfile& L, double u0,
                                         const SolverConfig& config) {
  const int n = p.dim();
  require(p.domain().contains(u0), ErrorCode::kOutOfDomain, "u0 outside the profile domain");
  require(L.domain().contains(u0) && L.eval(u0) > 0.0, ErrorCode::kPrecondition,
          "L must be positive");
  Interval range = integration_range(L.domain(), u0);
  {
    // restrict to the component around u0 where L stays positive
    const std::vector<double> grid = range.uniform_grid(4097);
    const double step = grid[1] - grid[0];
    bool cut_lo = false, cut_hi = false;
    for (double U : grid) {
      if (L.eval(U) > 0.0) continue;
      if (U < u0) range.lo = std::max(range.lo, U + step), cut_lo = true;
      else range.hi = std::min(range.hi, U - step), cut_hi = true;
    }
    const double margin = 0.02 * range.length();
    if (cut_lo) range.lo += margin;
    if (cut_hi) range.hi -= margin;
    require(range.contains(u0), ErrorCode::kPrecondition, "L must be positive near u0");
  }

  OdeRhs rhs = [L](double U, const Vec&) {
    const double l = L.eval(U);
    return Vec::Constant(1, 1.0 / (l * l));
  };
  const OdeSolution usol = integrate(rhs, u0, Vec::Constant(1, u0), range, config);

  // keep the U-window whose image stays inside the profile domain
  auto inside = [&](double U) { return p.domain().contains(usol.eval(U)(0)); };
  auto edge = [&](double from, double to) {
    if (inside(to)) return to;
    double a = from, b = to;
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (a + b);
      (inside(m) ? a : b) = m;
    }
    return a;
  };
  const std::vector<double> probe = range.uniform_grid(dense_sample_count(range, config));
  double lo = u0, hi = u0;
  for (auto it = probe.begin(); it != probe.end(); ++it)
    if (*it > u0) {
      if (!inside(*it)) break;
      hi = *it;
    }
  for (auto it = probe.rbegin(); it != probe.rend(); ++it)
    if (*it < u0) {
      if (!inside(*it)) break;
      lo = *it;
    }
  if (hi < range.hi) hi = edge(hi, std::min(range.hi, hi + range.length() / (probe.size() - 1)));
  if (lo > range.lo) lo = edge(lo, std::max(range.lo, lo - range.length() / (probe.size() - 1)));
  const Interval window{lo, hi};
  require(window.length() > 0.0, ErrorCode::kOutOfDomain, "empty reparametrization window");

  ScalarProfile u_of_U = ScalarProfile::callable(
      [usol, L](double U) {
        const Jet l = L.jet(U);
        const double i2 = 1.0 / (l[0] * l[0]);
        return Jet{usol.eval(U)(0), i2, -2.0 * i2 * l[1] / l[0],
                   6.0 * i2 * i2 * l[1] * l[1] - 2.0 * i2 * l[2] / l[0]};
      },
      window);

  auto c_first = [L](double U) {
    const Jet l = L.jet(U);
    return l[3] / l[0] - l[2] * l[1] / (l[0] * l[0]);
  };
  std::function<Mat(double, int)> P2;  // orders 0..2
  P2 = [p, u_of_U, L, c_first, n, window](double U, int order) -> Mat {
    const Jet l = L.jet(U);
    const Jet u = u_of_U.jet(U);
    const double a0 = std::pow(l[0], -4.0);
    const Mat I = Mat::Identity(n, n);
    const Mat b0 = p.eval(u[0]);
    if (order == 0) return a0 * b0 - (l[2] / l[0]) * I;
    const double a1 = -4.0 * std::pow(l[0], -5.0) * l[1];
    const Mat p1 = p.eval(u[0], 1);
    const Mat b1 = p1 * u[1];
    if (order == 1) return a1 * b0 + a0 * b1 - c_first(U) * I;
    const double a2 = 20.0 * std::pow(l[0], -6.0) * l[1] * l[1] - 4.0 * std::pow(l[0], -5.0) * l[2];
    const Mat b2 = p.eval(u[0], 2) * u[1] * u[1] + p1 * u[2];
    const double h = 1e-4;
    const double c = std::clamp(U, window.lo + h, window.hi - h);
    const double c2 = (c_first(c + h) - c_first(c - h)) / (2.0 * h);
    return a2 * b0 + 2.0 * a1 * b1 + a0 * b2 - c2 * I;
  };
  auto P = [P2, window](double U, int order) -> Mat {
    if (order < 3) return P2(U, order);
    const double h = 1e-3;
    const double c = std::clamp(U, window.lo + h, window.hi - h);
    return (P2(c + h, 2) - P2(c - h, 2)) / (2.0 * h);
  };
  MatrixProfile profile = MatrixProfile::callable(n, Symmetry::kSymmetric, window, P);

  PointMap map(
      MapKind::kConformalReparam, n,
      [u_of_U, L](const SpacetimePoint& q) {
        const Jet l = L.jet(q.u);
        return SpacetimePoint{u_of_U.eval(q.u), q.v - 0.5 * q.x.squaredNorm() * l[1] / l[0],
                              q.x / l[0]};
      },
      [u_of_U, L, n](const SpacetimePoint& q) {
        const Jet l = L.jet(q.u);
        Mat j = Mat::Zero(n + 2, n + 2);
        j(0, 0) = u_of_U.eval(q.u, 1);
        j(1, 0) = -0.5 * q.x.squaredNorm() * (l[2] / l[0] - l[1] * l[1] / (l[0] * l[0]));
        j(1, 1) = 1.0;
        j.block(1, 2, 1, n) = -(l[1] / l[0]) * q.x.transpose();
        j.block(2, 0, n, 1) = -q.x * l[1] / (l[0] * l[0]);
        j.bottomRightCorner(n, n) = Mat::Identity(n, n) / l[0];
        return j;
      },
      MapParameters{{{"u0", u0}}, {}});

  ConformalReparamResult out{profile, map, u_of_U, L, 0.0};
  const BrinkmannMetric source = BrinkmannMetric::make(profile);
  const BrinkmannMetric target = BrinkmannMetric::make(p);
  out.residual = pullback_residual(
      map, source, target, sample_points(window, n, kResidualPoints, kResidualSeed),
      [L](const SpacetimePoint& q) { return std::pow(L.eval(q.u), -2.0); });
  return out;
}

}  // namespace planewave
