#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "planewave/bernoulli.hpp"
#include "planewave/interval.hpp"
#include "planewave/linalg.hpp"
#include "planewave/scalar_profile.hpp"

namespace planewave {

enum class Symmetry { kSymmetric, kSkew };

class MatrixProfile;

namespace profile_kind {

struct Constant {
  Mat value;
};
/// u ↦ e^{−uω} P₀ e^{uω}
struct RotatingConstant {
  Mat omega;
  Mat base;
};
/// u ↦ (a − b u)⁻² P₀
struct PowerLaw {
  double a, b;
  Mat base;
};
struct ScalarTimesFixed {
  ScalarProfile scalar;
  Mat fixed;
};
/// u ↦ p_α(u)·diag(1, −1)
struct BernoulliFamily {
  ShiftSequence alpha;
};
/// Entrywise cubic spline through matrix samples.
struct Sampled {
  std::vector<double> grid;
  std::vector<Mat> values;
  std::vector<CubicSpline> entries;  // column-major
};
struct Sum {
  std::vector<MatrixProfile> terms;
};
/// Closure returning the derivative of the requested order (0..3).
struct Callable {
  std::function<Mat(double, int)> fn;
};

}  // namespace profile_kind

/// A smooth symmetric or skew matrix-valued function of u, immutable and
/// cheap to copy.
class MatrixProfile {
 public:
  using Variant = std::variant<profile_kind::Constant, profile_kind::RotatingConstant,
                               profile_kind::PowerLaw, profile_kind::ScalarTimesFixed,
                               profile_kind::BernoulliFamily, profile_kind::Sampled,
                               profile_kind::Sum, profile_kind::Callable>;

  /// Symmetry inferred from the value unless given (a zero matrix is both).
  static MatrixProfile constant(const Mat& value, std::optional<Symmetry> symmetry = std::nullopt);
  static MatrixProfile zero(int n, Symmetry symmetry = Symmetry::kSymmetric);
  static MatrixProfile rotating_constant(const Mat& omega, const Mat& base);
  static MatrixProfile power_law(double a, double b, const Mat& base, Interval domain);
  static MatrixProfile scalar_times(const ScalarProfile& scalar, const Mat& fixed);
  static MatrixProfile bernoulli_family(const ShiftSequence& alpha);
  static MatrixProfile sampled(std::vector<double> grid, std::vector<Mat> values,
                               Symmetry symmetry = Symmetry::kSymmetric);
  static MatrixProfile sum(std::vector<MatrixProfile> terms);
  static MatrixProfile callable(int n, Symmetry symmetry, Interval domain,
                                std::function<Mat(double, int)> fn,
                                std::vector<double> knots = {});

  /// The `order`-th derivative (0..3) at u.
  Mat eval(double u, int order = 0) const;

  int dim() const { return n_; }
  Symmetry symmetry() const { return symmetry_; }
  const Interval& domain() const { return domain_; }
  const Variant& variant() const { return *data_; }

  /// Finite window used by sampling-based predicates.
  Interval sampling_range() const;
  /// Distinguished points (spline knots, cell boundaries) inside the sampling range.
  std::vector<double> knots() const;
  /// Uniform grid of `count` points on the sampling range merged with knots.
  std::vector<double> sample_grid(int count) const;

  /// Restrict the declared domain (must stay inside the current one).
  MatrixProfile restricted(const Interval& sub) const;

  /// Same profile under a shared identity; used to detect fields on different metrics.
  const void* identity() const { return data_.get(); }

 private:
  MatrixProfile(Variant v, int n, Symmetry symmetry, Interval domain,
                std::vector<double> knots = {});

  std::shared_ptr<const Variant> data_;
  int n_ = 0;
  Symmetry symmetry_ = Symmetry::kSymmetric;
  Interval domain_;
  std::vector<double> extra_knots_;
};

struct TraceDecomposition {
  Mat trace_free;
  double trace_part = 0.0;  // P with tr(M) = nP
};

TraceDecomposition trace_decompose(const Mat& m, double tol = 1e-10);

/// ‖p‖_k = sup_{[−k,k]} Σ_{j≤k} ‖p^{(j)}‖_F on a uniform grid of the given step.
/// Orders above 3 use central differences of the third derivative.
double seminorm(const MatrixProfile& profile, int k, double grid_step = 1e-3);

}  // namespace planewave
