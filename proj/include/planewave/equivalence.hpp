#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "planewave/forms.hpp"
#include "planewave/metric.hpp"
#include "planewave/ode.hpp"
#include "planewave/point_map.hpp"
#include "planewave/scalar_profile.hpp"

namespace planewave {

enum class Verdict { kIsometric, kNotIsometric, kInconclusive };
std::string_view to_string(Verdict verdict);

/// ū = a(u − u0), v̄ = v/a, x̄ = γx with a²γᵀp̄(ū)γ = p(u).
struct IsometryWitness {
  double a = 1.0;
  double u0 = 0.0;
  Mat gamma;
  std::optional<std::string> composed_with;
  /// sup over the grid of |a²γᵀp̄γ − p| / (1 + |p|)
  double grid_error = 0.0;
  /// pullback residual of the assembled point map
  double residual = 0.0;

  PointMap map() const { return PointMap::affine_u(a, u0, gamma); }
};

/// Witness of the inverse isometry (a ↦ 1/a, γ ↦ γᵀ).
IsometryWitness invert(const IsometryWitness& w);
/// Witness of outer ∘ inner.
IsometryWitness compose(const IsometryWitness& outer, const IsometryWitness& inner);

struct IsometryOptions {
  /// relative sup tolerance of the dense-grid check
  double grid_tol = 1e-6;
  int grid = 2001;
  int max_probes = 32;
  double eigen_gap = 1e-6;
  int pullback_points = 50;
  std::uint64_t seed = 20240611;
};

struct IsometryResult {
  Verdict verdict = Verdict::kNotIsometric;
  std::optional<IsometryWitness> witness;
  std::string reason;
  int candidates = 0;
};

/// Decides isometry by invariant-feature candidates (a, u0) and eigenvector
/// alignment for γ; the witness maps pm1 to pm2.
IsometryResult brinkmann_isometry(const BrinkmannMetric& pm1, const BrinkmannMetric& pm2,
                                  const IsometryOptions& opts = {});

/// Largest relative deviation of a²γᵀp₂(a(u−u0))γ from p₁(u) on a grid.
double witness_grid_error(const BrinkmannMetric& pm1, const BrinkmannMetric& pm2,
                          const IsometryWitness& w, const Interval& range, int grid);

struct RosenTransformResult {
  /// h̄ = (I + HE)ᵀh(I + HE), with exact derivatives up to order 3.
  MatrixProfile h_bar;
  /// (ū, v̄, x̄) ↦ (u, v̄ + ½x̄ᵀ(EHE + E)x̄, (I + HE)x̄): pulls G_h back to G_h̄.
  PointMap map;
  Mat E;
  HInverseSolution H;
  double u0 = 0.0;
  double residual = 0.0;
};

RosenTransformResult rosen_transform(const MatrixProfile& h, const Mat& E, double u0,
                                     const SolverConfig& config = {});

struct RosenIsomorphismResult {
  Verdict verdict = Verdict::kNotIsometric;
  std::optional<IsometryWitness> brinkmann;
  /// Rosen chart of r1 → Rosen chart of r2.
  std::optional<PointMap> map;
  /// Quadratic v-coefficient of the witness map at the base point.
  Mat E;
  double residual = 0.0;
  Interval verified_on;
  std::string reason;
};

RosenIsomorphismResult rosen_isomorphic(const RosenMetric& r1, const RosenMetric& r2,
                                        const IsometryOptions& opts = {},
                                        const SolverConfig& config = {});

/// (u, v, x) ↦ (U(u), sgn(U̇)v + xᵀxÜ/(4|U̇|), |U̇|^{1/2}x); pulls G_p̄ back to |U̇|·G_p.
PointMap reparametrization_map(const ScalarProfile& U, int n);

/// (u, v, x) ↦ (u, a²v, aAx)
PointMap wavefront_scaling(double a, const Mat& A);

struct FactorizationOptions {
  int points = 50;
  std::uint64_t seed = 20240611;
};

/// Residual of φ = α∘ρ∘μ as a conformal map pm1 → pm2, with the conformal
/// factor at each point read off the G_uv component.
double verify_conformal_factorization(const BrinkmannMetric& pm1, const BrinkmannMetric& pm2,
                                      const ScalarProfile& U, const PointMap& rho, double a,
                                      const Mat& A, const FactorizationOptions& opts = {});

}  // namespace planewave
