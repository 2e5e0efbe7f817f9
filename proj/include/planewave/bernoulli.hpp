#pragma once

#include <string>
#include <vector>

namespace planewave {

/// A finite window of a sequence in the Hilbert cube [0, 1/2]^ℤ. Indices
/// outside [lo, hi] read as zero.
class ShiftSequence {
 public:
  ShiftSequence(int lo, std::vector<double> values);

  /// Symmetric window [-N, N].
  static ShiftSequence centered(std::vector<double> values);

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(values_.size()) - 1; }
  /// Largest |index| in the window; shifts are bounded by 2N.
  int half_width() const;
  const std::vector<double>& values() const { return values_; }

  double at(int index) const;

  friend bool operator==(const ShiftSequence&, const ShiftSequence&) = default;

 private:
  int lo_;
  std::vector<double> values_;
};

/// f_a(u) = a/(u(1−u)) + (1−a)/(u²(1−u)) on 0 < u < 1, for 0 ≤ a < 1, and its
/// derivatives up to order 3.
double bump_exponent(double a, double u, int order = 0);

/// Location and value of the minimum of f_a over (0, 1), in closed form.
struct BumpMinimum {
  double u;
  double value;
};
BumpMinimum bump_exponent_minimum(double a);

/// g_a(u): 1 outside (0, 1) and 1 + e^{4 − f_a(u)} inside; derivatives up to
/// order 3 (all vanish outside (0, 1)).
double bump(double a, double u, int order = 0);

/// p_α(u) = −1 + Π_n g_{α(n)}(u − n). Only the ⌊u⌋ factor differs from 1.
double family_profile(const ShiftSequence& alpha, double u, int order = 0);

}  // namespace planewave
