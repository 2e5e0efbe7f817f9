#include "planewave/ode.hpp"

#include <algorithm>
#include <cmath>

#include "dop853_tableau.hpp"
#include "planewave/error.hpp"

namespace planewave {

namespace detail {

namespace tab = dop853;

struct Segment {
  double t_old = 0.0;
  double t_new = 0.0;
  Vec y_old;
  std::array<Vec, tab::kInterpolatorPower> F;

  // Horner evaluation over alternating factors x and (1 − x).
  void eval(double t, Vec& y, Vec* dy) const {
    const double h = t_new - t_old;
    const double x = (t - t_old) / h;
    y = Vec::Zero(y_old.size());
    Vec d = Vec::Zero(y_old.size());
    for (int i = 0; i < tab::kInterpolatorPower; ++i) {
      y += F[static_cast<std::size_t>(tab::kInterpolatorPower - 1 - i)];
      if (i % 2 == 0) {
        d = d * x + y / h;
        y *= x;
      } else {
        d = d * (1.0 - x) - y / h;
        y *= 1.0 - x;
      }
    }
    y += y_old;
    if (dy) *dy = d;
  }
};

struct Trajectory {
  int direction = 1;
  std::vector<Segment> segments;

  double end() const { return segments.empty() ? 0.0 : segments.back().t_new; }

  const Segment& locate(double t) const {
    // segments are ordered along `direction`; compare in the forward frame
    auto before = [&](const Segment& s, double value) {
      return direction * s.t_new < direction * value;
    };
    auto it = std::lower_bound(segments.begin(), segments.end(), t, before);
    if (it == segments.end()) --it;
    return *it;
  }
};

namespace {

double rms_norm(const Vec& v) {
  return v.size() == 0 ? 0.0 : std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

bool finite(const Vec& v) { return v.allFinite(); }

class Stepper {
 public:
  Stepper(const OdeRhs& rhs, const SolverConfig& config) : rhs_(rhs), config_(config) {}

  double initial_step(double t0, const Vec& y0, const Vec& f0, int direction) const {
    const Vec scale = (config_.abs_tol + y0.array().abs() * config_.rel_tol).matrix();
    const double d0 = rms_norm(y0.cwiseQuotient(scale));
    const double d1 = rms_norm(f0.cwiseQuotient(scale));
    const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const Vec y1 = y0 + h0 * direction * f0;
    const Vec f1 = rhs_(t0 + h0 * direction, y1);
    const double d2 = rms_norm((f1 - f0).cwiseQuotient(scale)) / h0;
    double h1;
    if (d1 <= 1e-15 && d2 <= 1e-15)
      h1 = std::max(1e-6, h0 * 1e-3);
    else
      h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
    return std::min(100.0 * h0, h1);
  }

  // One trial step; fills K rows 0..12 and returns the new state.
  Vec step(double t, const Vec& y, const Vec& f, double h) {
    const auto n = y.size();
    K_.assign(tab::kStagesExtended, Vec::Zero(n));
    K_[0] = f;
    for (int s = 1; s < tab::kStages; ++s) {
      Vec dy = Vec::Zero(n);
      for (int j = 0; j < s; ++j) dy += tab::A[s][j] * K_[j];
      K_[s] = rhs_(t + tab::C[s] * h, y + h * dy);
    }
    Vec incr = Vec::Zero(n);
    for (int j = 0; j < tab::kStages; ++j) incr += tab::B[j] * K_[j];
    Vec y_new = y + h * incr;
    K_[tab::kStages] = rhs_(t + h, y_new);
    return y_new;
  }

  double error_norm(double h, const Vec& scale) const {
    const auto n = scale.size();
    Vec e5 = Vec::Zero(n), e3 = Vec::Zero(n);
    for (int j = 0; j <= tab::kStages; ++j) {
      e5 += tab::E5[j] * K_[j];
      e3 += tab::E3[j] * K_[j];
    }
    const double n5 = e5.cwiseQuotient(scale).squaredNorm();
    const double n3 = e3.cwiseQuotient(scale).squaredNorm();
    if (!std::isfinite(n5) || !std::isfinite(n3)) return std::numeric_limits<double>::infinity();
    if (n5 == 0.0 && n3 == 0.0) return 0.0;
    const double denom = n5 + 0.01 * n3;
    return std::abs(h) * n5 / std::sqrt(denom * static_cast<double>(n));
  }

  Segment dense(double t_old, double h, const Vec& y_old, const Vec& y_new) {
    const auto n = y_old.size();
    for (int s = tab::kStages + 1; s < tab::kStagesExtended; ++s) {
      Vec dy = Vec::Zero(n);
      for (int j = 0; j < s; ++j) dy += tab::A[s][j] * K_[j];
      K_[s] = rhs_(t_old + tab::C[s] * h, y_old + h * dy);
    }
    Segment seg;
    seg.t_old = t_old;
    seg.t_new = t_old + h;
    seg.y_old = y_old;
    const Vec delta = y_new - y_old;
    seg.F[0] = delta;
    seg.F[1] = h * K_[0] - delta;
    seg.F[2] = 2.0 * delta - h * (K_[tab::kStages] + K_[0]);
    for (int r = 0; r < 4; ++r) {
      Vec acc = Vec::Zero(n);
      for (int j = 0; j < tab::kStagesExtended; ++j) acc += tab::D[r][j] * K_[j];
      seg.F[static_cast<std::size_t>(3 + r)] = h * acc;
    }
    return seg;
  }

  const Vec& f_new() const { return K_[tab::kStages]; }

 private:
  const OdeRhs& rhs_;
  const SolverConfig& config_;
  std::vector<Vec> K_;
};

struct DirectionResult {
  std::shared_ptr<Trajectory> trajectory;
  std::optional<double> blowup;
};

DirectionResult integrate_direction(const OdeRhs& rhs, double t0, const Vec& y0, double t_bound,
                                    const SolverConfig& config, bool detect_blowup) {
  constexpr double kSafety = 0.9, kMinFactor = 0.2, kMaxFactor = 10.0;
  constexpr double kExponent = -1.0 / 8.0;
  constexpr int kMaxSteps = 2'000'000;

  auto traj = std::make_shared<Trajectory>();
  const int direction = t_bound >= t0 ? 1 : -1;
  traj->direction = direction;
  if (t_bound == t0) return {traj, std::nullopt};

  Stepper stepper(rhs, config);
  double t = t0;
  Vec y = y0;
  Vec f = rhs(t, y);
  require(finite(f), ErrorCode::kIntegrationFailure, "non-finite right-hand side at the base point");
  double h_abs = std::min(stepper.initial_step(t, y, f, direction), config.max_step);
  std::optional<double> blowup;

  for (int count = 0; direction * (t_bound - t) > 0; ++count) {
    require(count < kMaxSteps, ErrorCode::kIntegrationFailure, "step budget exhausted");
    const double min_step = 10.0 * std::abs(std::nextafter(t, direction * INFINITY) - t);
    h_abs = std::min(h_abs, config.max_step);
    bool accepted = false, rejected = false;
    Vec y_new;
    double h = 0.0;
    while (!accepted) {
      if (h_abs < min_step) {
        if (detect_blowup) {
          blowup = t;
          return {traj, blowup};
        }
        fail(ErrorCode::kIntegrationFailure, "step size underflow at u = " + std::to_string(t));
      }
      h = h_abs * direction;
      double t_new = t + h;
      if (direction * (t_new - t_bound) > 0) {
        t_new = t_bound;
        h = t_new - t;
        h_abs = std::abs(h);
      }
      y_new = stepper.step(t, y, f, h);
      const Vec scale =
          (config.abs_tol + y.array().abs().max(y_new.array().abs()) * config.rel_tol).matrix();
      const double err = finite(y_new) ? stepper.error_norm(h, scale)
                                       : std::numeric_limits<double>::infinity();
      if (err < 1.0) {
        double factor = err == 0.0 ? kMaxFactor
                                   : std::min(kMaxFactor, kSafety * std::pow(err, kExponent));
        if (rejected) factor = std::min(1.0, factor);
        h_abs *= factor;
        accepted = true;
      } else {
        h_abs *= std::isfinite(err) ? std::max(kMinFactor, kSafety * std::pow(err, kExponent))
                                    : kMinFactor;
        rejected = true;
      }
    }
    Segment seg = stepper.dense(t, h, y, y_new);
    const Vec f_next = stepper.f_new();
    if (detect_blowup && y_new.norm() > config.blowup_ceiling) {
      // bisect the crossing inside the last step
      double lo = seg.t_old, hi = seg.t_new;
      Vec tmp;
      while (std::abs(hi - lo) > 1e-12 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        seg.eval(mid, tmp, nullptr);
        (tmp.norm() > config.blowup_ceiling ? hi : lo) = mid;
      }
      // keep the segment but cap it at the crossing
      traj->segments.push_back(seg);
      blowup = lo;
      return {traj, blowup};
    }
    traj->segments.push_back(std::move(seg));
    t += h;
    if (direction * (t - t_bound) > 0) t = t_bound;
    y = std::move(y_new);
    f = f_next;
  }
  return {traj, blowup};
}

}  // namespace
}  // namespace detail

Vec OdeSolution::eval(double u, int order) const {
  require(order == 0 || order == 1, ErrorCode::kInvalidArgument, "solution order must be 0 or 1");
  require(domain_.contains(u), ErrorCode::kOutOfDomain,
          "solution evaluated outside " + domain_.describe());
  const auto& traj = u >= base_ ? above_ : below_;
  if (!traj || traj->segments.empty()) {
    // degenerate side of zero length: use the other side's first segment
    const auto& other = u >= base_ ? below_ : above_;
    require(other && !other->segments.empty(), ErrorCode::kOutOfDomain, "empty solution");
    Vec y, dy;
    other->segments.front().eval(u, y, &dy);
    return order == 0 ? y : dy;
  }
  Vec y, dy;
  traj->locate(u).eval(u, y, order == 1 ? &dy : nullptr);
  return order == 0 ? y : dy;
}

std::optional<double> OdeSolution::blowup_point() const {
  if (blowup_lo_ && blowup_hi_)
    return (base_ - *blowup_lo_ <= *blowup_hi_ - base_) ? blowup_lo_ : blowup_hi_;
  return blowup_lo_ ? blowup_lo_ : blowup_hi_;
}

std::vector<double> OdeSolution::step_points() const {
  std::vector<double> out{base_};
  for (const auto* t : {below_.get(), above_.get()})
    if (t)
      for (const auto& s : t->segments)
        if (domain_.contains(s.t_new)) out.push_back(s.t_new);
  std::sort(out.begin(), out.end());
  return out;
}

OdeSolution integrate(const OdeRhs& rhs, double u0, const Vec& y0, const Interval& range,
                      const SolverConfig& config, bool detect_blowup) {
  require(range.is_bounded(), ErrorCode::kInvalidArgument, "integration range must be bounded");
  require(range.contains(u0), ErrorCode::kOutOfDomain, "base point outside integration range");
  require(config.rel_tol > 0 && config.abs_tol > 0 && config.max_step > 0,
          ErrorCode::kInvalidArgument, "solver tolerances must be positive");
  OdeSolution sol;
  sol.base_ = u0;
  sol.size_ = static_cast<int>(y0.size());
  auto lo = detail::integrate_direction(rhs, u0, y0, range.lo, config, detect_blowup);
  auto hi = detail::integrate_direction(rhs, u0, y0, range.hi, config, detect_blowup);
  sol.below_ = lo.trajectory;
  sol.above_ = hi.trajectory;
  sol.blowup_lo_ = lo.blowup;
  sol.blowup_hi_ = hi.blowup;
  sol.domain_ = {lo.blowup.value_or(range.lo), hi.blowup.value_or(range.hi)};
  if (lo.blowup && lo.trajectory->segments.empty()) sol.domain_.lo = u0;
  if (hi.blowup && hi.trajectory->segments.empty()) sol.domain_.hi = u0;
  return sol;
}

Interval integration_range(const Interval& domain, double u0) {
  require(domain.contains(u0), ErrorCode::kOutOfDomain, "base point outside the domain");
  Interval r = domain.clipped();
  if (!r.contains(u0)) r = domain.intersect({u0 - 10.0, u0 + 10.0});
  return r;
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unflatten(const Vec& v, int n) { return Eigen::Map<const Mat>(v.data(), n, n); }

namespace {
Interval pick_range(const Interval& domain, double u0, const std::optional<Interval>& range) {
  if (!range) return integration_range(domain, u0);
  require(range->lo >= domain.lo && range->hi <= domain.hi, ErrorCode::kOutOfDomain,
          "integration range exceeds the profile domain");
  return *range;
}
}  // namespace

Vec JacobiSolution::q(double u) const {
  const Vec s = sol_.eval(u);
  return s.head(s.size() / 2);
}

Vec JacobiSolution::qdot(double u) const {
  const Vec s = sol_.eval(u);
  return s.tail(s.size() / 2);
}

JacobiSolution solve_jacobi_vector(const MatrixProfile& p, double u0, const Vec& q0,
                                   const Vec& qdot0, const SolverConfig& config,
                                   std::optional<Interval> range) {
  const int n = p.dim();
  require(q0.size() == n && qdot0.size() == n, ErrorCode::kInvalidArgument,
          "initial data dimension mismatch");
  Vec y0(2 * n);
  y0 << q0, qdot0;
  OdeRhs rhs = [p, n](double u, const Vec& y) {
    Vec d(2 * n);
    d << y.tail(n), -p.eval(u) * y.head(n);
    return d;
  };
  return JacobiSolution(integrate(rhs, u0, y0, pick_range(p.domain(), u0, range), config));
}

Mat LagrangianMatrix::L(double u) const {
  const Vec s = sol_.eval(u);
  return unflatten(s.head(n_ * n_), n_);
}

Mat LagrangianMatrix::Ldot(double u) const {
  const Vec s = sol_.eval(u);
  return unflatten(s.tail(n_ * n_), n_);
}

double LagrangianMatrix::lagrangian_defect(double u) const {
  const Mat l = L(u), ld = Ldot(u);
  return (l.transpose() * ld - ld.transpose() * l).norm();
}

LagrangianMatrix solve_jacobi_matrix(const MatrixProfile& p, double u0, const Mat& L0,
                                     const Mat& Ldot0, const SolverConfig& config,
                                     std::optional<Interval> range) {
  const int n = p.dim();
  require(L0.rows() == n && L0.cols() == n && Ldot0.rows() == n && Ldot0.cols() == n,
          ErrorCode::kInvalidArgument, "initial data dimension mismatch");
  const Mat w = L0.transpose() * Ldot0;
  require(is_symmetric(w, 1e-10), ErrorCode::kPrecondition,
          "initial data violates the Lagrangian condition");
  const int m = n * n;
  Vec y0(2 * m);
  y0 << flatten(L0), flatten(Ldot0);
  OdeRhs rhs = [p, n, m](double u, const Vec& y) {
    Vec d(2 * m);
    d << y.tail(m), flatten(-p.eval(u) * unflatten(y.head(m), n));
    return d;
  };
  return LagrangianMatrix(integrate(rhs, u0, y0, pick_range(p.domain(), u0, range), config), p, n);
}

Mat SachsSolution::S(double u) const { return symmetric_part(unflatten(sol_.eval(u), n_)); }

Mat SachsSolution::Sdot(double u) const {
  return symmetric_part(unflatten(sol_.eval(u, 1), n_));
}

SachsSolution solve_sachs(const MatrixProfile& p, double u0, const Mat& S0,
                          const SolverConfig& config, std::optional<Interval> range) {
  const int n = p.dim();
  require(S0.rows() == n && S0.cols() == n, ErrorCode::kInvalidArgument,
          "initial data dimension mismatch");
  require(is_symmetric(S0), ErrorCode::kNotSymmetric, "Sachs initial data must be symmetric");
  OdeRhs rhs = [p, n](double u, const Vec& y) {
    const Mat s = unflatten(y, n);
    return flatten(-(s * s) - p.eval(u));
  };
  return SachsSolution(
      integrate(rhs, u0, flatten(symmetric_part(S0)), pick_range(p.domain(), u0, range), config,
                true),
      n);
}

double WSolution::w(double u, int order) const {
  require(order >= 0 && order <= 4, ErrorCode::kInvalidArgument, "w order must be 0..4");
  const Vec s = sol_.eval(u);
  if (order < 3) return s(order);
  const Jet P = P_.jet(u);
  if (order == 3) return -4.0 * P[0] * s(1) - 2.0 * P[1] * s(0);
  return -6.0 * P[1] * s(1) - 4.0 * P[0] * s(2) - 2.0 * P[2] * s(0);
}

WSolution solve_w_equation(const ScalarProfile& P, double u0, double w0, double wdot0,
                           double wddot0, const SolverConfig& config,
                           std::optional<Interval> range) {
  OdeRhs rhs = [P](double u, const Vec& y) {
    Vec d(3);
    d << y(1), y(2), -4.0 * P.eval(u) * y(1) - 2.0 * P.eval(u, 1) * y(0);
    return d;
  };
  Vec y0(3);
  y0 << w0, wdot0, wddot0;
  return WSolution(integrate(rhs, u0, y0, pick_range(P.domain(), u0, range), config), P);
}

Mat HInverseSolution::H(double u, int order) const {
  require(order >= 0 && order <= 3, ErrorCode::kInvalidArgument, "H order must be 0..3");
  const int n = h_.dim();
  if (order == 0) return symmetric_part(unflatten(sol_.eval(u), n));
  const Mat hi = h_.eval(u).inverse();
  if (order == 1) return symmetric_part(hi);
  const Mat hd = h_.eval(u, 1);
  if (order == 2) return symmetric_part(-hi * hd * hi);
  return symmetric_part(2.0 * hi * hd * hi * hd * hi - hi * h_.eval(u, 2) * hi);
}

HInverseSolution integrate_h_inverse(const MatrixProfile& h, double u0, const SolverConfig& config,
                                     std::optional<Interval> range) {
  const int n = h.dim();
  OdeRhs rhs = [h](double u, const Vec&) {
    Eigen::LLT<Mat> llt(h.eval(u));
    require(llt.info() == Eigen::Success, ErrorCode::kSingular,
            "h is not positive definite at u = " + std::to_string(u));
    return flatten(llt.solve(Mat::Identity(h.dim(), h.dim())));
  };
  return HInverseSolution(
      integrate(rhs, u0, Vec::Zero(n * n), pick_range(h.domain(), u0, range), config), h);
}

}  // namespace planewave
