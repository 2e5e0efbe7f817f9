#pragma once

#include <optional>

#include "planewave/metric.hpp"
#include "planewave/ode.hpp"
#include "planewave/point_map.hpp"

namespace planewave {

struct BrinkmannizationResult {
  BrinkmannMetric metric;
  /// Rosen chart → Brinkmann chart (β_L).
  PointMap map;
  double base_point = 0.0;
  /// Subinterval on which L was integrated and p sampled.
  Interval working;
  /// L, L̇, L̈ of the Lagrangian frame (order 0..2).
  std::function<Mat(double, int)> frame;
  double residual = 0.0;
};

/// Rosen → Brinkmann with L(u0) = h(u0)^{1/2} and L̇ = ½L^{−T}ḣ.
BrinkmannizationResult brinkmannize(const RosenMetric& rosen,
                                    std::optional<double> u0 = std::nullopt,
                                    const SolverConfig& config = {});

struct RosenizationResult {
  RosenMetric metric;
  /// Brinkmann chart → Rosen chart (inverse of β_L).
  PointMap map;
  Interval validity;
  LagrangianMatrix frame;
  double residual = 0.0;
};

/// Brinkmann → Rosen from the Lagrangian frame L(u0) = I, L̇(u0) = S0.
RosenizationResult rosenize(const BrinkmannMetric& brinkmann, double u0,
                            std::optional<Mat> S0 = std::nullopt,
                            const SolverConfig& config = {});

struct AlekseevskyToBrinkmann {
  BrinkmannMetric metric;
  /// Alekseevsky chart → Brinkmann chart.
  PointMap map;
  double residual = 0.0;
};

AlekseevskyToBrinkmann alekseevsky_to_brinkmann(const AlekseevskyMetric& alek);

struct BrinkmannToAlekseevsky {
  AlekseevskyMetric metric;
  /// Brinkmann chart → Alekseevsky chart.
  PointMap map;
  double residual = 0.0;
};

BrinkmannToAlekseevsky brinkmann_to_alekseevsky(const BrinkmannMetric& brink);

struct ConformalReparamResult {
  /// P(U) = L⁻⁴p(u(U)) − (L″/L)I on the U-interval.
  MatrixProfile profile;
  /// (U, V, X) ↦ (u, v, x); pulls G_p back to L⁻²·G_P.
  PointMap map;
  /// u(U) with du/dU = L⁻²; derivatives up to order 3.
  ScalarProfile u_of_U;
  ScalarProfile L;
  double residual = 0.0;
};

/// Reparametrize by L(U) > 0 with u(u0) = u0 at U = u0.
ConformalReparamResult conformal_reparam(const MatrixProfile& p, const ScalarProfile& L, double u0,
                                         const SolverConfig& config = {});

/// Number of points used to tabulate derived profiles on `range`.
int dense_sample_count(const Interval& range, const SolverConfig& config);

}  // namespace planewave
