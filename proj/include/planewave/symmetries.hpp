#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "planewave/metric.hpp"
#include "planewave/ode.hpp"
#include "planewave/point_map.hpp"

namespace planewave {

/// (q(u), q̇(u)) of a Jacobi solution.
using QFunction = std::function<std::pair<Vec, Vec>(double)>;
/// w^{(order)}(u), order 0..4.
using WFunction = std::function<double(double, int)>;

/// V = bH + kD + X_q + V_(w,W) with H = ∂_v, D = 2v∂_v + x∂_x, X_q = xᵀq̇∂_v + q∂_x and
/// V_(w,W) = w∂_u + ¼ẅ xᵀx∂_v + ½ẇ x∂_x + Wx∂_x. Conformal factor ẇ + 2k.
struct StructuredVectorField {
  MatrixProfile p;
  double b = 0.0;
  double k = 0.0;
  QFunction q;  // empty: no X_q part
  WFunction w;  // empty: no w part
  Mat W;
  std::string label;

  int n() const { return p.dim(); }
  Vec q_at(double u) const;
  Vec qdot_at(double u) const;
  double w_at(double u, int order = 0) const;
  /// ẇ + 2k
  double conformal_factor(double u) const { return w_at(u, 1) + 2.0 * k; }

  /// Coordinate components (V^u, V^v, V^x) at a point.
  Vec value(const SpacetimePoint& point) const;
  /// ∂_μ V^ρ (row ρ, column μ).
  Mat jacobian(const SpacetimePoint& point) const;
};

StructuredVectorField field_H(const MatrixProfile& p);
StructuredVectorField field_D(const MatrixProfile& p);
StructuredVectorField field_X(const MatrixProfile& p, const JacobiSolution& q,
                              std::string label = "X_q");
/// Yx∂_x for a constant skew Y.
StructuredVectorField field_L(const MatrixProfile& p, const Mat& Y);
StructuredVectorField field_V(const MatrixProfile& p, WFunction w, const Mat& W,
                              std::string label = "V");
/// T_{a,b,C} = (a − bu)∂_u + bv∂_v + Cx∂_x
StructuredVectorField field_T(const MatrixProfile& p, double a, double b, const Mat& C);

/// H plus X_q for the Jacobi solutions with data (e_i, 0) and (0, e_i) at u0.
std::vector<StructuredVectorField> heisenberg_basis(const BrinkmannMetric& metric, double u0,
                                                    const SolverConfig& config = {});

/// q₁ᵀq̇₂ − q₂ᵀq̇₁ at u0; throws kInconsistent if it drifts by more than 1e−6 on the grid.
double symplectic_pairing(const QFunction& q1, const QFunction& q2, double u0,
                          const std::vector<double>& grid);
double symplectic_pairing(const JacobiSolution& q1, const JacobiSolution& q2);

struct SamplingOptions {
  int samples = 257;
  double rel_threshold = 1e-8;
};

/// Skew W with p(u)W skew for all sampled u.
std::vector<Mat> commutant_automorphisms(const BrinkmannMetric& metric,
                                         SamplingOptions opts = {257, 1e-9});
/// Dimension λ of skew W commuting with p(u) for all sampled u.
int centralizer_dimension(const BrinkmannMetric& metric, SamplingOptions opts = {257, 1e-9});
std::vector<Mat> centralizer_basis(const BrinkmannMetric& metric,
                                   SamplingOptions opts = {257, 1e-9});

struct ExtraIsometryReport {
  enum class Status { kNone, kFound, kFlatDegenerate };
  Status status = Status::kNone;
  double a = 0.0;
  double b = 0.0;
  Mat C;
  /// Number of independent (a, b) directions (≤ 1 unless flat).
  int dimension = 0;
  /// Full null-space dimension including centralizer directions of C.
  int nullity = 0;
  double smallest_ratio = 0.0;
  std::optional<StructuredVectorField> field;
};

std::string_view to_string(ExtraIsometryReport::Status status);

/// Solves (a − bu)ṗ − 2bp + [p, C] = 0 over sampled u.
ExtraIsometryReport extra_isometry(const BrinkmannMetric& metric, SamplingOptions opts = {});

struct LieAlgebraReport {
  std::vector<StructuredVectorField> basis;
  int dim = 0;
  int n = 0;
  int lambda = 0;
  bool has_extra_symmetry = false;
  double base_point = 0.0;
  /// c[(i·dim + j)·dim + k] with [e_i, e_j] = Σ_k c_ijk e_k.
  std::vector<double> structure_constants;
  double decomposition_residual = 0.0;
  double jacobi_residual = 0.0;
  double antisymmetry_residual = 0.0;
  /// Columns span the derived algebra (coordinates in `basis`).
  Mat derived_algebra;
  /// Columns span the center of the derived algebra.
  Mat derived_center;
  std::vector<int> derived_algebra_indices;
  std::vector<int> center_indices;
  /// Diagnostics of the extra-field test.
  double q_min = 0.0;
  double w_equation_residual = 0.0;
  double w_system_residual = 0.0;

  double c(int i, int j, int k) const {
    return structure_constants[static_cast<std::size_t>((i * dim + j) * dim + k)];
  }
};

struct ConformalOptions {
  int samples = 257;
  double rel_threshold = 1e-8;
  double w_tol = 1e-7;
  double curvature_tol = 1e-10;
  SolverConfig solver;
};

/// Closed-form w = Q^{−1/4}, Q = tr(p̃²), with derivatives up to order 4.
WFunction scaling_function(const MatrixProfile& p);

LieAlgebraReport conformal_algebra(const BrinkmannMetric& metric, const ConformalOptions& opts = {});

StructuredVectorField lie_bracket(const StructuredVectorField& a, const StructuredVectorField& b);
/// Central-difference bracket A^μ∂_μB − B^μ∂_μA of the coordinate fields.
Vec lie_bracket_fd(const StructuredVectorField& a, const StructuredVectorField& b,
                   const SpacetimePoint& point, double step = 1e-5);

/// Coordinates of a field in a basis (least squares on the data at u0) and the fit residual.
std::pair<Vec, double> decompose(const StructuredVectorField& field,
                                 const std::vector<StructuredVectorField>& basis, double u0);

/// Fills the structure constants, derived algebra and its center.
void compute_structure(LieAlgebraReport& report);
void derived_algebra_and_center(LieAlgebraReport& report, double rel_threshold = 1e-8);

/// Largest |(ℒ_V G − S G)_{μν}| over the points.
double killing_residual(const BrinkmannMetric& metric, const StructuredVectorField& field,
                        const std::function<double(double)>& factor,
                        const std::vector<SpacetimePoint>& points);
/// Same with the field's own factor ẇ + 2k on 200 random points.
double killing_residual(const BrinkmannMetric& metric, const StructuredVectorField& field,
                        std::uint64_t seed = 7);

struct MicrocosmNormalForm {
  AlekseevskyMetric metric;
  Mat omega;
  Mat p;
  double u_ref = 0.0;
  /// Alekseevsky chart → Brinkmann chart, φ*G_p = c·G_A.
  PointMap map;
  ConformalFactor factor;
  Interval chart;
  double residual = 0.0;
};

MicrocosmNormalForm microcosm_normal_form(const BrinkmannMetric& metric,
                                          const ConformalOptions& opts = {});

}  // namespace planewave
