#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "planewave/interval.hpp"
#include "planewave/linalg.hpp"
#include "planewave/profile.hpp"
#include "planewave/scalar_profile.hpp"

namespace planewave {

struct SolverConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  double dense_grid_step = 1e-3;
  double blowup_ceiling = 1e8;
};

/// dy/du = f(u, y)
using OdeRhs = std::function<Vec(double, const Vec&)>;

namespace detail {
struct Trajectory;
}

/// Dense solution of an initial-value problem, integrated outward from a base point.
class OdeSolution {
 public:
  /// State (order 0) or its u-derivative (order 1) from the dense interpolant.
  Vec eval(double u, int order = 0) const;

  const Interval& domain() const { return domain_; }
  double base_point() const { return base_; }
  int state_size() const { return size_; }
  /// Nearest point to the base where the state norm crossed the blowup ceiling.
  std::optional<double> blowup_point() const;
  std::optional<double> blowup_below() const { return blowup_lo_; }
  std::optional<double> blowup_above() const { return blowup_hi_; }
  /// Accepted step boundaries, ascending.
  std::vector<double> step_points() const;

 private:
  friend OdeSolution integrate(const OdeRhs&, double, const Vec&, const Interval&,
                               const SolverConfig&, bool);
  std::shared_ptr<const detail::Trajectory> below_, above_;
  Interval domain_;
  double base_ = 0.0;
  int size_ = 0;
  std::optional<double> blowup_lo_, blowup_hi_;
};

/// Adaptive Dormand–Prince 8(5,3) with 7th-order dense output, integrated from u0 to both
/// ends of `range`. With `detect_blowup` the integration stops where ‖y‖ exceeds the ceiling.
OdeSolution integrate(const OdeRhs& rhs, double u0, const Vec& y0, const Interval& range,
                      const SolverConfig& config = {}, bool detect_blowup = false);

/// Default integration window: the domain clipped around u0.
Interval integration_range(const Interval& domain, double u0);

/// q̈ + p q = 0; state (q, q̇).
class JacobiSolution {
 public:
  explicit JacobiSolution(OdeSolution sol) : sol_(std::move(sol)) {}
  Vec q(double u) const;
  Vec qdot(double u) const;
  const OdeSolution& solution() const { return sol_; }
  const Interval& domain() const { return sol_.domain(); }

 private:
  OdeSolution sol_;
};

JacobiSolution solve_jacobi_vector(const MatrixProfile& p, double u0, const Vec& q0,
                                   const Vec& qdot0, const SolverConfig& config = {},
                                   std::optional<Interval> range = std::nullopt);

/// L̈ + p L = 0 with Lagrangian initial data.
class LagrangianMatrix {
 public:
  LagrangianMatrix(OdeSolution sol, MatrixProfile p, int n)
      : sol_(std::move(sol)), p_(std::move(p)), n_(n) {}
  Mat L(double u) const;
  Mat Ldot(double u) const;
  Mat Lddot(double u) const { return -p_.eval(u) * L(u); }
  Mat L3dot(double u) const { return -p_.eval(u, 1) * L(u) - p_.eval(u) * Ldot(u); }
  /// ‖LᵀL̇ − L̇ᵀL‖ at u.
  double lagrangian_defect(double u) const;
  double base_point() const { return sol_.base_point(); }
  const Interval& domain() const { return sol_.domain(); }
  const OdeSolution& solution() const { return sol_; }

 private:
  OdeSolution sol_;
  MatrixProfile p_;
  int n_;
};

LagrangianMatrix solve_jacobi_matrix(const MatrixProfile& p, double u0, const Mat& L0,
                                     const Mat& Ldot0, const SolverConfig& config = {},
                                     std::optional<Interval> range = std::nullopt);

/// Ṡ + S² + p = 0, stopped at blowup.
class SachsSolution {
 public:
  explicit SachsSolution(OdeSolution sol, int n) : sol_(std::move(sol)), n_(n) {}
  Mat S(double u) const;
  Mat Sdot(double u) const;
  std::optional<double> blowup_point() const { return sol_.blowup_point(); }
  const Interval& domain() const { return sol_.domain(); }
  const OdeSolution& solution() const { return sol_; }

 private:
  OdeSolution sol_;
  int n_;
};

SachsSolution solve_sachs(const MatrixProfile& p, double u0, const Mat& S0,
                          const SolverConfig& config = {},
                          std::optional<Interval> range = std::nullopt);

/// w⃛ + 4Pẇ + 2Ṗw = 0; state (w, ẇ, ẅ).
class WSolution {
 public:
  WSolution(OdeSolution sol, ScalarProfile P) : sol_(std::move(sol)), P_(std::move(P)) {}
  /// Derivative of order 0..4 (orders 3, 4 from the equation).
  double w(double u, int order = 0) const;
  const Interval& domain() const { return sol_.domain(); }
  const OdeSolution& solution() const { return sol_; }

 private:
  OdeSolution sol_;
  ScalarProfile P_;
};

WSolution solve_w_equation(const ScalarProfile& P, double u0, double w0, double wdot0,
                           double wddot0, const SolverConfig& config = {},
                           std::optional<Interval> range = std::nullopt);

/// h Ḣ = I with H(u0) = 0.
class HInverseSolution {
 public:
  HInverseSolution(OdeSolution sol, MatrixProfile h) : sol_(std::move(sol)), h_(std::move(h)) {}
  Mat H(double u, int order = 0) const;
  const Interval& domain() const { return sol_.domain(); }
  const OdeSolution& solution() const { return sol_; }

 private:
  OdeSolution sol_;
  MatrixProfile h_;
};

HInverseSolution integrate_h_inverse(const MatrixProfile& h, double u0,
                                     const SolverConfig& config = {},
                                     std::optional<Interval> range = std::nullopt);

Vec flatten(const Mat& m);
Mat unflatten(const Vec& v, int n);

}  // namespace planewave
