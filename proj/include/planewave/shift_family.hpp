#pragma once

#include <optional>
#include <string>

#include "planewave/bernoulli.hpp"
#include "planewave/equivalence.hpp"
#include "planewave/metric.hpp"

namespace planewave {

/// Vacuum plane wave with p(u) = p_α(u)·diag(1, −1).
BrinkmannMetric family_metric(const ShiftSequence& alpha);

/// (σᵐα)_n = α(n + m); the window moves to [lo − m, hi − m]. Requires |m| ≤ 2N.
ShiftSequence bernoulli_shift(const ShiftSequence& alpha, int m);

struct HilbertDistance {
  double value;
  /// The omitted tail Σ_{k > k_max} 2^{−k} is at most this.
  double truncation_bound;
};

/// Σ_{k=0}^{k_max} 2^{−k} ‖α−β‖_k / (1 + ‖α−β‖_k), ‖x‖_k = max_{|i| ≤ k} |x(i)|.
HilbertDistance hilbert_distance(const ShiftSequence& alpha, const ShiftSequence& beta, int k_max);

/// Smallest |m| ≤ 2N with β = σᵐα (ties resolved towards positive m).
std::optional<int> shift_equivalent(const ShiftSequence& alpha, const ShiftSequence& beta);

struct CrosscheckReport {
  std::optional<int> shift;
  IsometryResult isometry;
  bool agree = false;
  /// sign of the witness scale a
  int epsilon = 0;
  /// the witness u0 is an integer m' with β = σ^{m'}α
  bool witness_matches_shift = false;
};

/// Runs shift_equivalent and brinkmann_isometry on the family metrics and
/// checks that the verdicts agree; throws kInconsistent when they do not.
CrosscheckReport family_isometry_crosscheck(const ShiftSequence& alpha, const ShiftSequence& beta,
                                            const IsometryOptions& opts = {});

}  // namespace planewave
