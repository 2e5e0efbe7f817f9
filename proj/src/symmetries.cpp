#include "planewave/symmetries.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "planewave/error.hpp"

namespace planewave {

namespace {

double reference_point(const MatrixProfile& p) {
  return p.domain().contains(0.0) ? 0.0 : p.sampling_range().midpoint();
}

Mat zero_skew(int n) { return Mat::Zero(n, n); }

Mat trace_free(const Mat& m) {
  const auto n = m.rows();
  return m - (m.trace() / static_cast<double>(n)) * Mat::Identity(n, n);
}

// Largest |entry| normalization of a row block.
double row_scale(std::initializer_list<double> norms) {
  double s = 1.0;
  for (double v : norms) s += v;
  return 1.0 / s;
}

}  // namespace

Vec StructuredVectorField::q_at(double u) const {
  return q ? q(u).first : Vec(Vec::Zero(n()));
}

Vec StructuredVectorField::qdot_at(double u) const {
  return q ? q(u).second : Vec(Vec::Zero(n()));
}

double StructuredVectorField::w_at(double u, int order) const { return w ? w(u, order) : 0.0; }

Vec StructuredVectorField::value(const SpacetimePoint& pt) const {
  const int dim = n();
  Vec out(dim + 2);
  const double w0 = w_at(pt.u, 0), w1 = w_at(pt.u, 1), w2 = w_at(pt.u, 2);
  out(0) = w0;
  out(1) = b + 2.0 * k * pt.v + pt.x.dot(qdot_at(pt.u)) + 0.25 * w2 * pt.x.squaredNorm();
  out.tail(dim) = k * pt.x + q_at(pt.u) + 0.5 * w1 * pt.x + W * pt.x;
  return out;
}

Mat StructuredVectorField::jacobian(const SpacetimePoint& pt) const {
  const int dim = n();
  Mat j = Mat::Zero(dim + 2, dim + 2);
  const double w1 = w_at(pt.u, 1), w2 = w_at(pt.u, 2), w3 = w ? w_at(pt.u, 3) : 0.0;
  const Vec qq = q_at(pt.u), qd = qdot_at(pt.u);
  j(0, 0) = w1;
  j(1, 0) = -pt.x.dot(p.eval(pt.u) * qq) + 0.25 * w3 * pt.x.squaredNorm();
  j(1, 1) = 2.0 * k;
  j.block(1, 2, 1, dim) = (qd + 0.5 * w2 * pt.x).transpose();
  j.block(2, 0, dim, 1) = qd + 0.5 * w2 * pt.x;
  j.bottomRightCorner(dim, dim) = (k + 0.5 * w1) * Mat::Identity(dim, dim) + W;
  return j;
}

StructuredVectorField field_H(const MatrixProfile& p) {
  StructuredVectorField f{p, 1.0, 0.0, {}, {}, zero_skew(p.dim()), "H"};
  return f;
}

StructuredVectorField field_D(const MatrixProfile& p) {
  return {p, 0.0, 1.0, {}, {}, zero_skew(p.dim()), "D"};
}

StructuredVectorField field_X(const MatrixProfile& p, const JacobiSolution& q, std::string label) {
  QFunction fn = [q](double u) { return std::make_pair(q.q(u), q.qdot(u)); };
  return {p, 0.0, 0.0, std::move(fn), {}, zero_skew(p.dim()), std::move(label)};
}

StructuredVectorField field_L(const MatrixProfile& p, const Mat& Y) {
  require(is_skew(Y), ErrorCode::kNotSymmetric, "rotation generator must be skew");
  return {p, 0.0, 0.0, {}, {}, skew_part(Y), "L_Y"};
}

StructuredVectorField field_V(const MatrixProfile& p, WFunction w, const Mat& W,
                              std::string label) {
  require(W.rows() == p.dim() && is_skew(W), ErrorCode::kNotSymmetric, "W must be skew");
  return {p, 0.0, 0.0, {}, std::move(w), skew_part(W), std::move(label)};
}

StructuredVectorField field_T(const MatrixProfile& p, double a, double b, const Mat& C) {
  WFunction w = [a, b](double u, int order) {
    return order == 0 ? a - b * u : (order == 1 ? -b : 0.0);
  };
  auto f = field_V(p, std::move(w), C, "T");
  f.k = 0.5 * b;
  return f;
}

std::vector<StructuredVectorField> heisenberg_basis(const BrinkmannMetric& metric, double u0,
                                                    const SolverConfig& config) {
  const MatrixProfile& p = metric.p;
  const int n = metric.n();
  Interval range = p.sampling_range();
  if (!range.contains(u0)) range = integration_range(p.domain(), u0);
  std::vector<StructuredVectorField> out{field_H(p)};
  for (int i = 0; i < n; ++i) {
    const Vec e = Vec::Unit(n, i);
    out.push_back(field_X(p, solve_jacobi_vector(p, u0, e, Vec::Zero(n), config, range),
                          "X_q+" + std::to_string(i + 1)));
  }
  for (int i = 0; i < n; ++i) {
    const Vec e = Vec::Unit(n, i);
    out.push_back(field_X(p, solve_jacobi_vector(p, u0, Vec::Zero(n), e, config, range),
                          "X_q-" + std::to_string(i + 1)));
  }
  return out;
}

double symplectic_pairing(const QFunction& q1, const QFunction& q2, double u0,
                          const std::vector<double>& grid) {
  auto omega = [&](double u) {
    const auto [a, ad] = q1(u);
    const auto [c, cd] = q2(u);
    return a.dot(cd) - c.dot(ad);
  };
  const double base = omega(u0);
  for (double u : grid)
    require(std::abs(omega(u) - base) <= 1e-6 * (1.0 + std::abs(base)), ErrorCode::kInconsistent,
            "symplectic pairing is not constant; inputs do not solve one Jacobi equation");
  return base;
}

double symplectic_pairing(const JacobiSolution& q1, const JacobiSolution& q2) {
  const Interval r = q1.domain().intersect(q2.domain());
  const double u0 = q1.solution().base_point();
  return symplectic_pairing([&](double u) { return std::make_pair(q1.q(u), q1.qdot(u)); },
                            [&](double u) { return std::make_pair(q2.q(u), q2.qdot(u)); },
                            r.contains(u0) ? u0 : r.midpoint(), r.uniform_grid(101));
}

namespace {

// Null space of a stacked linear map on skew matrices, returned as matrices.
std::vector<Mat> skew_null_space(const BrinkmannMetric& metric, const SamplingOptions& opts,
                                 bool commutator_form) {
  const int n = metric.n();
  const auto basis = skew_basis(n);
  if (basis.empty()) return {};
  const auto grid = metric.p.sample_grid(opts.samples);
  const int m = n * (n + 1) / 2;
  const int mc = commutator_form ? n * n : m;
  Mat a(static_cast<Eigen::Index>(grid.size()) * mc, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Mat pu = metric.p.eval(grid[g]);
    const double s = row_scale({pu.norm()});
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const Mat& e = basis[c];
      Vec col = commutator_form ? flatten(commutator(pu, e)) : symmetric_entries(symmetric_part(pu * e));
      a.block(static_cast<Eigen::Index>(g) * mc, static_cast<Eigen::Index>(c), mc, 1) = s * col;
    }
  }
  const auto ns = null_space(a, opts.rel_threshold);
  std::vector<Mat> out;
  for (Eigen::Index c = 0; c < ns.basis.cols(); ++c) out.push_back(skew_from_coords(ns.basis.col(c), n));
  return out;
}

}  // namespace

std::vector<Mat> commutant_automorphisms(const BrinkmannMetric& metric, SamplingOptions opts) {
  return skew_null_space(metric, opts, false);
}

std::vector<Mat> centralizer_basis(const BrinkmannMetric& metric, SamplingOptions opts) {
  return skew_null_space(metric, opts, true);
}

int centralizer_dimension(const BrinkmannMetric& metric, SamplingOptions opts) {
  return static_cast<int>(centralizer_basis(metric, opts).size());
}

std::string_view to_string(ExtraIsometryReport::Status status) {
  switch (status) {
    case ExtraIsometryReport::Status::kNone: return "none";
    case ExtraIsometryReport::Status::kFound: return "found";
    case ExtraIsometryReport::Status::kFlatDegenerate: return "flat_degenerate";
  }
  return "unknown";
}

namespace {

// Minimum-norm skew C with [p(u), C] = rhs(u) over the grid; returns C and the scaled residual.
std::pair<Mat, double> solve_commutator_system(const MatrixProfile& p,
                                               const std::vector<double>& grid,
                                               const std::function<Mat(double)>& tilde,
                                               const std::function<Mat(double)>& rhs,
                                               const std::function<double(double)>& scale,
                                               double rel_threshold) {
  const int n = p.dim();
  const auto basis = skew_basis(n);
  const int m = n * (n + 1) / 2;
  Mat a(static_cast<Eigen::Index>(grid.size()) * m, static_cast<Eigen::Index>(basis.size()));
  Vec r(static_cast<Eigen::Index>(grid.size()) * m);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double u = grid[g];
    const Mat t = tilde(u);
    const double s = scale(u);
    for (std::size_t c = 0; c < basis.size(); ++c)
      a.block(static_cast<Eigen::Index>(g) * m, static_cast<Eigen::Index>(c), m, 1) =
          s * symmetric_entries(commutator(t, basis[c]));
    r.segment(static_cast<Eigen::Index>(g) * m, m) = s * symmetric_entries(rhs(u));
  }
  if (basis.empty()) return {Mat::Zero(n, n), r.size() ? r.cwiseAbs().maxCoeff() : 0.0};
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rel_threshold);
  const Vec coords = svd.solve(r);
  const double residual = (a * coords - r).cwiseAbs().maxCoeff();
  return {skew_from_coords(coords, n), residual};
}

}  // namespace

ExtraIsometryReport extra_isometry(const BrinkmannMetric& metric, SamplingOptions opts) {
  ExtraIsometryReport out;
  const int n = metric.n();
  out.C = Mat::Zero(n, n);
  if (is_flat(metric)) {
    out.status = ExtraIsometryReport::Status::kFlatDegenerate;
    out.dimension = 2;
    out.nullity = 2 + n * (n - 1) / 2;
    return out;
  }
  const MatrixProfile& p = metric.p;
  const auto grid = p.sample_grid(opts.samples);
  const auto basis = skew_basis(n);
  const int m = n * (n + 1) / 2;
  const auto cols = static_cast<Eigen::Index>(2 + basis.size());
  Mat a(static_cast<Eigen::Index>(grid.size()) * m, cols);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double u = grid[g];
    const Mat p0 = p.eval(u), p1 = p.eval(u, 1);
    const double s = row_scale({p0.norm(), p1.norm()});
    const auto row = static_cast<Eigen::Index>(g) * m;
    a.block(row, 0, m, 1) = s * symmetric_entries(p1);
    a.block(row, 1, m, 1) = s * symmetric_entries(-u * p1 - 2.0 * p0);
    for (std::size_t c = 0; c < basis.size(); ++c)
      a.block(row, static_cast<Eigen::Index>(2 + c), m, 1) =
          s * symmetric_entries(commutator(p0, basis[c]));
  }
  Vec norms = a.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < cols; ++c)
    if (norms(c) > 0.0) a.col(c) /= norms(c);
    else norms(c) = 1.0;
  const auto ns = null_space(a, opts.rel_threshold);
  out.nullity = static_cast<int>(ns.basis.cols());
  out.smallest_ratio = ns.smallest_ratio;
  if (out.nullity == 0) return out;

  Mat z = ns.basis;
  for (Eigen::Index c = 0; c < cols; ++c) z.row(c) /= norms(c);
  const Mat ab = z.topRows(2);
  Eigen::JacobiSVD<Mat> svd(ab, Eigen::ComputeFullU);
  const Vec sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (top > 0.0 && sv(i) > 1e-8 * top) ++out.dimension;
  // an (a, b) = 0 null vector is a commutant automorphism, not an extra isometry
  if (out.dimension == 0) return out;

  Vec d = svd.matrixU().col(0);
  d /= d.cwiseAbs().maxCoeff();
  const double lead = std::abs(d(0)) > 1e-12 ? d(0) : d(1);
  if (lead < 0) d = -d;
  out.a = d(0);
  out.b = d(1);
  const double aa = out.a, bb = out.b;
  auto [C, residual] = solve_commutator_system(
      p, grid, [&](double u) { return p.eval(u); },
      [&](double u) { return Mat(-((aa - bb * u) * p.eval(u, 1) - 2.0 * bb * p.eval(u))); },
      [&](double u) { return row_scale({p.eval(u).norm(), p.eval(u, 1).norm()}); },
      opts.rel_threshold);
  (void)residual;
  out.C = C;
  out.status = ExtraIsometryReport::Status::kFound;
  out.field = field_T(p, out.a, out.b, out.C);
  return out;
}

WFunction scaling_function(const MatrixProfile& p) {
  return [p](double u, int order) -> double {
    require(order >= 0 && order <= 4, ErrorCode::kInvalidArgument, "w order must be 0..4");
    const int n = p.dim();
    const Mat t0 = trace_free(p.eval(u));
    const double Q = (t0 * t0).trace();
    require(Q > 0.0, ErrorCode::kSingular, "tr(p̃²) vanishes");
    const double w0 = std::pow(Q, -0.25);
    if (order == 0) return w0;
    const Mat t1 = trace_free(p.eval(u, 1));
    const double Q1 = 2.0 * (t0 * t1).trace();
    const double w1 = -0.25 * std::pow(Q, -1.25) * Q1;
    if (order == 1) return w1;
    const Mat t2 = trace_free(p.eval(u, 2));
    const double Q2 = 2.0 * (t1 * t1 + t0 * t2).trace();
    const double w2 = (5.0 / 16.0) * std::pow(Q, -2.25) * Q1 * Q1 - 0.25 * std::pow(Q, -1.25) * Q2;
    if (order == 2) return w2;
    if (order == 3) {
      const Mat t3 = trace_free(p.eval(u, 3));
      const double Q3 = 2.0 * (3.0 * t1 * t2 + t0 * t3).trace();
      return -(45.0 / 64.0) * std::pow(Q, -3.25) * Q1 * Q1 * Q1 +
             (15.0 / 16.0) * std::pow(Q, -2.25) * Q1 * Q2 - 0.25 * std::pow(Q, -1.25) * Q3;
    }
    // fourth derivative from the w-equation
    const double P = p.eval(u).trace() / n, P1 = p.eval(u, 1).trace() / n,
                 P2 = p.eval(u, 2).trace() / n;
    return -6.0 * P1 * w1 - 4.0 * P * w2 - 2.0 * P2 * w0;
  };
}

namespace {

struct SPart {
  Vec s, sdot;
};

// s = ½ẇq − wq̇ + Wq and its derivative for V_(w,W) acting on X_q.
SPart s_part(const StructuredVectorField& qf, const StructuredVectorField& vf, double u) {
  const Vec q = qf.q_at(u), qd = qf.qdot_at(u);
  const double w0 = vf.w_at(u, 0), w1 = vf.w_at(u, 1), w2 = vf.w_at(u, 2);
  const Mat pu = qf.p.eval(u);
  return {0.5 * w1 * q - w0 * qd + vf.W * q,
          0.5 * w2 * q - 0.5 * w1 * qd + w0 * pu * q + vf.W * qd};
}

bool has_v_part(const StructuredVectorField& f) { return f.w || max_abs(f.W) > 0.0; }

}  // namespace

StructuredVectorField lie_bracket(const StructuredVectorField& A, const StructuredVectorField& B) {
  require(A.p.identity() == B.p.identity(), ErrorCode::kInvalidArgument,
          "fields belong to different metrics");
  const MatrixProfile& p = A.p;
  const int n = p.dim();
  StructuredVectorField out{p, 0.0, 0.0, {}, {}, Mat::Zero(n, n), "[" + A.label + "," + B.label + "]"};

  out.b = 2.0 * A.b * B.k - 2.0 * A.k * B.b;
  if (A.q && B.q) {
    const double u0 = reference_point(p);
    const auto [a, ad] = A.q(u0);
    const auto [c, cd] = B.q(u0);
    out.b += a.dot(cd) - c.dot(ad);
  }

  const bool needs_q = (A.q && (B.k != 0.0 || has_v_part(B))) || (B.q && (A.k != 0.0 || has_v_part(A)));
  if (needs_q) {
    out.q = [A, B](double u) {
      Vec s = B.k * A.q_at(u) - A.k * B.q_at(u);
      Vec sd = B.k * A.qdot_at(u) - A.k * B.qdot_at(u);
      if (A.q && has_v_part(B)) {
        const auto t = s_part(A, B, u);
        s += t.s;
        sd += t.sdot;
      }
      if (B.q && has_v_part(A)) {
        const auto t = s_part(B, A, u);
        s -= t.s;
        sd -= t.sdot;
      }
      return std::make_pair(s, sd);
    };
  }

  if (A.w && B.w) {
    WFunction wa = A.w, wb = B.w;
    out.w = [wa, wb](double u, int order) -> double {
      const double a0 = wa(u, 0), a1 = wa(u, 1), b0 = wb(u, 0), b1 = wb(u, 1);
      switch (order) {
        case 0: return a0 * b1 - b0 * a1;
        case 1: return a0 * wb(u, 2) - b0 * wa(u, 2);
        case 2: return a1 * wb(u, 2) + a0 * wb(u, 3) - b1 * wa(u, 2) - b0 * wa(u, 3);
        case 3:
          return 2.0 * a1 * wb(u, 3) + a0 * wb(u, 4) - 2.0 * b1 * wa(u, 3) - b0 * wa(u, 4);
        default: fail(ErrorCode::kInvalidArgument, "bracket w derivatives available to order 3");
      }
    };
  }
  out.W = B.W * A.W - A.W * B.W;
  return out;
}

Vec lie_bracket_fd(const StructuredVectorField& a, const StructuredVectorField& b,
                   const SpacetimePoint& pt, double step) {
  const int dim = a.n() + 2;
  auto jac = [&](const StructuredVectorField& f) {
    Mat j(dim, dim);
    for (int c = 0; c < dim; ++c) {
      SpacetimePoint plus = pt, minus = pt;
      if (c == 0) plus.u += step, minus.u -= step;
      else if (c == 1) plus.v += step, minus.v -= step;
      else plus.x(c - 2) += step, minus.x(c - 2) -= step;
      j.col(c) = (f.value(plus) - f.value(minus)) / (2.0 * step);
    }
    return j;
  };
  return jac(b) * a.value(pt) - jac(a) * b.value(pt);
}

namespace {

Vec features(const StructuredVectorField& f, double u0) {
  const int n = f.n();
  const auto skew = coords_from_skew(f.W);
  Vec out(2 + 2 * n + 3 + skew.size());
  out << f.b, f.k, f.q_at(u0), f.qdot_at(u0), f.w_at(u0, 0), f.w_at(u0, 1), f.w_at(u0, 2), skew;
  return out;
}

}  // namespace

std::pair<Vec, double> decompose(const StructuredVectorField& field,
                                 const std::vector<StructuredVectorField>& basis, double u0) {
  const Vec target = features(field, u0);
  Mat m(target.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = features(basis[i], u0);
  const Vec coeffs = m.colPivHouseholderQr().solve(target);
  const double residual = (m * coeffs - target).cwiseAbs().maxCoeff();
  return {coeffs, residual};
}

void compute_structure(LieAlgebraReport& report) {
  const int d = static_cast<int>(report.basis.size());
  report.dim = d;
  report.structure_constants.assign(static_cast<std::size_t>(d * d * d), 0.0);
  report.decomposition_residual = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const auto br = lie_bracket(report.basis[static_cast<std::size_t>(i)],
                                  report.basis[static_cast<std::size_t>(j)]);
      const auto [coeffs, residual] = decompose(br, report.basis, report.base_point);
      report.decomposition_residual = std::max(report.decomposition_residual, residual);
      for (int k = 0; k < d; ++k)
        report.structure_constants[static_cast<std::size_t>((i * d + j) * d + k)] = coeffs(k);
    }
  double anti = 0.0, jac = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) anti = std::max(anti, std::abs(report.c(i, j, k) + report.c(j, i, k)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int m = 0; m < d; ++m)
            s += report.c(i, j, m) * report.c(m, k, l) + report.c(j, k, m) * report.c(m, i, l) +
                 report.c(k, i, m) * report.c(m, j, l);
          jac = std::max(jac, std::abs(s));
        }
  report.antisymmetry_residual = anti;
  report.jacobi_residual = jac;
}

void derived_algebra_and_center(LieAlgebraReport& report, double rel_threshold) {
  const int d = report.dim;
  report.derived_algebra = Mat::Zero(d, 0);
  report.derived_center = Mat::Zero(d, 0);
  report.derived_algebra_indices.clear();
  report.center_indices.clear();
  if (d == 0) return;
  Mat brackets(d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) brackets(k, i * d + j) = report.c(i, j, k);
  Eigen::JacobiSVD<Mat> svd(brackets, Eigen::ComputeThinU);
  const Vec sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (top > 1e-12 && sv(i) > rel_threshold * top) ++rank;
  const Mat D = svd.matrixU().leftCols(rank);
  report.derived_algebra = D;
  for (int i = 0; i < d; ++i) {
    const Vec e = Vec::Unit(d, i);
    if (rank > 0 && (e - D * (D.transpose() * e)).norm() < 1e-8) report.derived_algebra_indices.push_back(i);
  }
  if (rank == 0) return;
  // z = D c is central in the derived algebra iff [z, D_j] = 0 for all j
  auto bracket = [&](const Vec& x, const Vec& y) {
    Vec out = Vec::Zero(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double xy = x(i) * y(j);
        if (xy == 0.0) continue;
        for (int k = 0; k < d; ++k) out(k) += xy * report.c(i, j, k);
      }
    return out;
  };
  Mat system(d * rank, rank);
  for (int c = 0; c < rank; ++c)
    for (int j = 0; j < rank; ++j) system.block(j * d, c, d, 1) = bracket(D.col(c), D.col(j));
  const auto ns = null_space(system, rel_threshold);
  report.derived_center = D * ns.basis;
  const Mat Z = report.derived_center;
  for (int i = 0; i < d; ++i) {
    const Vec e = Vec::Unit(d, i);
    if (Z.cols() > 0) {
      const Eigen::HouseholderQR<Mat> qr(Z);
      const Vec coeffs = Z.colPivHouseholderQr().solve(e);
      if ((Z * coeffs - e).norm() < 1e-8) report.center_indices.push_back(i);
    }
  }
}

LieAlgebraReport conformal_algebra(const BrinkmannMetric& metric, const ConformalOptions& opts) {
  require(is_conformally_curved(metric, {opts.curvature_tol, 1001}), ErrorCode::kPrecondition,
          "metric is conformally trivial (p̃ ≡ 0)");
  const MatrixProfile& p = metric.p;
  const int n = metric.n();
  LieAlgebraReport report;
  report.n = n;
  report.base_point = reference_point(p);

  auto heis = heisenberg_basis(metric, report.base_point, opts.solver);
  report.basis.push_back(heis.front());
  report.basis.push_back(field_D(p));
  for (std::size_t i = 1; i < heis.size(); ++i) report.basis.push_back(heis[i]);
  const auto cent = centralizer_basis(metric, {opts.samples, 1e-9});
  report.lambda = static_cast<int>(cent.size());
  for (const auto& y : cent) report.basis.push_back(field_L(p, y));

  // extra conformal field: w = Q^{-1/4} with a skew W
  const auto grid = p.sample_grid(opts.samples);
  double qmin = std::numeric_limits<double>::infinity(), qmax = 0.0;
  for (double u : grid) {
    const Mat t = trace_free(p.eval(u));
    const double Q = (t * t).trace();
    qmin = std::min(qmin, Q);
    qmax = std::max(qmax, Q);
  }
  report.q_min = qmin;
  report.w_equation_residual = std::numeric_limits<double>::infinity();
  report.w_system_residual = std::numeric_limits<double>::infinity();
  if (qmax > 0.0 && qmin > 1e-12 * qmax) {
    const WFunction w = scaling_function(p);
    double worst = 0.0;
    for (double u : grid) {
      const double P = p.eval(u).trace() / n, P1 = p.eval(u, 1).trace() / n;
      const double w0 = w(u, 0), w1 = w(u, 1), w3 = w(u, 3);
      const double r = w3 + 4.0 * P * w1 + 2.0 * P1 * w0;
      worst = std::max(worst, std::abs(r) / (1.0 + std::abs(w3) + std::abs(4.0 * P * w1) +
                                             std::abs(2.0 * P1 * w0)));
    }
    report.w_equation_residual = worst;
    if (worst <= opts.w_tol) {
      auto [W, residual] = solve_commutator_system(
          p, grid, [&](double u) { return trace_free(p.eval(u)); },
          [&](double u) {
            return Mat(-(2.0 * w(u, 1) * trace_free(p.eval(u)) +
                         w(u, 0) * trace_free(p.eval(u, 1))));
          },
          [&](double u) {
            return row_scale({trace_free(p.eval(u)).norm(), trace_free(p.eval(u, 1)).norm()});
          },
          opts.rel_threshold);
      report.w_system_residual = residual;
      if (residual <= opts.w_tol) {
        report.has_extra_symmetry = true;
        report.basis.push_back(field_V(p, w, W, "V_(w,W)"));
      }
    }
  }
  compute_structure(report);
  derived_algebra_and_center(report, opts.rel_threshold);
  const bool center_is_H = report.derived_center.cols() == 1 && report.center_indices.size() == 1 &&
                           report.center_indices.front() == 0;
  require(center_is_H, ErrorCode::kInconsistent,
          "center of the derived algebra is not spanned by H");
  return report;
}

double killing_residual(const BrinkmannMetric& metric, const StructuredVectorField& field,
                        const std::function<double(double)>& factor,
                        const std::vector<SpacetimePoint>& points) {
  double worst = 0.0;
  const int n = metric.n();
  for (const auto& pt : points) {
    const Mat G = metric_components(metric, pt);
    const Mat J = field.jacobian(pt);
    const Vec V = field.value(pt);
    const Mat pu = metric.p.eval(pt.u);
    Mat lie = J.transpose() * G + G * J;
    lie(0, 0) += V(0) * pt.x.dot(metric.p.eval(pt.u, 1) * pt.x) + 2.0 * V.tail(n).dot(pu * pt.x);
    const double s = factor ? factor(pt.u) : 0.0;
    worst = std::max(worst, max_abs(lie - s * G));
  }
  return worst;
}

double killing_residual(const BrinkmannMetric& metric, const StructuredVectorField& field,
                        std::uint64_t seed) {
  const auto points = sample_points(metric.p.sampling_range(), metric.n(), 200, seed);
  return killing_residual(
      metric, field, [&field](double u) { return field.conformal_factor(u); }, points);
}

MicrocosmNormalForm microcosm_normal_form(const BrinkmannMetric& metric,
                                          const ConformalOptions& opts) {
  require(!is_flat(metric), ErrorCode::kPrecondition, "flat metric has no microcosm normal form");
  const LieAlgebraReport report = conformal_algebra(metric, opts);
  require(report.has_extra_symmetry, ErrorCode::kPrecondition,
          "metric has no extra conformal symmetry");
  const MatrixProfile& p = metric.p;
  const int n = metric.n();
  const StructuredVectorField& extra = report.basis.back();
  const double u_ref = report.base_point;
  const double c = 1.0 / extra.w_at(u_ref);
  const WFunction wf = extra.w;
  auto w = [wf, c](double u, int order) { return c * wf(u, order); };
  const Mat W = c * extra.W;

  const double w0 = w(u_ref, 0), w1 = w(u_ref, 1), w2 = w(u_ref, 2);
  const Mat P_ref = w0 * w0 * p.eval(u_ref) + (0.5 * w0 * w2 - 0.25 * w1 * w1) * Mat::Identity(n, n);
  MicrocosmNormalForm out{
      AlekseevskyMetric::make(MatrixProfile::constant(symmetric_part(P_ref + W * W), Symmetry::kSymmetric),
                              MatrixProfile::constant(-W, Symmetry::kSkew)),
      -W, symmetric_part(P_ref + W * W), u_ref, PointMap::identity(n), {}, {}, 0.0};

  // chart U around 0 with du/dU = w(u), u(0) = u_ref
  const Interval range = p.sampling_range();
  double wmax = 0.0;
  for (double u : range.uniform_grid(257)) wmax = std::max(wmax, std::abs(w(u, 0)));
  const Interval chart{-0.9 * (u_ref - range.lo) / wmax, 0.9 * (range.hi - u_ref) / wmax};
  require(chart.length() > 0.0, ErrorCode::kOutOfDomain, "empty microcosm chart");
  OdeRhs rhs = [w](double, const Vec& y) { return Vec::Constant(1, w(y(0), 0)); };
  const OdeSolution usol = integrate(rhs, 0.0, Vec::Constant(1, u_ref), chart, opts.solver);
  out.chart = chart;
  const Mat omega = out.omega;

  out.map = PointMap(
      MapKind::kConformalFactorization, n,
      [usol, w, omega](const SpacetimePoint& pt) {
        const double u = usol.eval(pt.u)(0);
        const Vec Y = expm(-pt.u * omega) * pt.x;
        return SpacetimePoint{u, pt.v + 0.25 * w(u, 1) * Y.squaredNorm(), std::sqrt(w(u, 0)) * Y};
      },
      [usol, w, omega, n](const SpacetimePoint& pt) {
        const double u = usol.eval(pt.u)(0);
        const Mat R = expm(-pt.u * omega);
        const Vec Y = R * pt.x;
        const double w0 = w(u, 0), w1 = w(u, 1), w2 = w(u, 2), r = std::sqrt(w0);
        Mat j = Mat::Zero(n + 2, n + 2);
        j(0, 0) = w0;
        j(1, 0) = 0.25 * w0 * w2 * Y.squaredNorm();
        j(1, 1) = 1.0;
        j.block(1, 2, 1, n) = 0.5 * w1 * (Y.transpose() * R);
        j.block(2, 0, n, 1) = 0.5 * r * w1 * Y - r * omega * Y;
        j.bottomRightCorner(n, n) = r * R;
        return j;
      },
      MapParameters{{{"u_ref", u_ref}}, {{"omega", omega}}});
  out.factor = [usol, w](const SpacetimePoint& pt) { return w(usol.eval(pt.u)(0), 0); };
  out.residual = pullback_residual(out.map, out.metric, metric,
                                   sample_points(chart, n, 50, 11), out.factor);
  return out;
}

}  // namespace planewave
