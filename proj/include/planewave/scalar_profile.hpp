#pragma once

#include <array>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "planewave/interval.hpp"
#include "planewave/spline.hpp"

namespace planewave {

/// Value and first three derivatives of a scalar function at a point.
using Jet = std::array<double, 4>;

/// A smooth real function of u with derivatives up to order 3.
class ScalarProfile {
 public:
  struct Constant {
    double value;
  };
  /// c₀ + c₁u + c₂u² + …
  struct Polynomial {
    std::vector<double> coeffs;
  };
  /// A·e^{k u}
  struct Exponential {
    double amplitude, rate;
  };
  /// A·cos(k u + φ)
  struct Cosine {
    double amplitude, frequency, phase;
  };
  /// A·cosh(k u + φ)
  struct HyperbolicCosine {
    double amplitude, rate, phase;
  };
  /// c·(a − b u)^m, defined where a − b u > 0.
  struct PowerLaw {
    double scale, a, b, exponent;
  };
  struct Sampled {
    CubicSpline spline;
  };
  /// Library-side escape hatch: the closure returns the jet at u.
  struct Callable {
    std::function<Jet(double)> jet;
  };
  using Variant = std::variant<Constant, Polynomial, Exponential, Cosine, HyperbolicCosine,
                               PowerLaw, Sampled, Callable>;

  ScalarProfile() : ScalarProfile(Constant{0.0}) {}
  explicit ScalarProfile(Variant v, Interval domain = Interval::real_line());

  static ScalarProfile constant(double c) { return ScalarProfile(Constant{c}); }
  static ScalarProfile polynomial(std::vector<double> coeffs) {
    return ScalarProfile(Polynomial{std::move(coeffs)});
  }
  static ScalarProfile sampled(std::vector<double> grid, std::vector<double> values);
  static ScalarProfile callable(std::function<Jet(double)> jet,
                                Interval domain = Interval::real_line());

  double eval(double u, int order = 0) const;
  Jet jet(double u) const;

  const Interval& domain() const { return domain_; }
  const Variant& variant() const { return *data_; }

 private:
  std::shared_ptr<const Variant> data_;
  Interval domain_;
};

}  // namespace planewave
