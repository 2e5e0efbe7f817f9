#include "planewave/shift_family.hpp"

#include <algorithm>
#include <cmath>

#include "planewave/error.hpp"

namespace planewave {

BrinkmannMetric family_metric(const ShiftSequence& alpha) {
  return BrinkmannMetric::make(MatrixProfile::bernoulli_family(alpha));
}

ShiftSequence bernoulli_shift(const ShiftSequence& alpha, int m) {
  require(std::abs(m) <= 2 * alpha.half_width(), ErrorCode::kInvalidArgument,
          "shift exceeds the window policy |m| <= 2N");
  return ShiftSequence(alpha.lo() - m, alpha.values());
}

HilbertDistance hilbert_distance(const ShiftSequence& alpha, const ShiftSequence& beta, int k_max) {
  require(k_max >= 1, ErrorCode::kInvalidArgument, "k_max must be at least 1");
  double sum = 0.0, norm = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    norm = std::max({norm, std::abs(alpha.at(k) - beta.at(k)), std::abs(alpha.at(-k) - beta.at(-k))});
    sum += std::ldexp(norm / (1.0 + norm), -k);
  }
  return {sum, std::ldexp(1.0, -k_max)};
}

namespace {

// Dyadic rationals with denominator at most 2^20 are compared exactly.
bool is_short_dyadic(double x) {
  const double scaled = std::ldexp(x, 20);
  return scaled == std::floor(scaled);
}

bool same_value(double x, double y) {
  if (is_short_dyadic(x) && is_short_dyadic(y)) return x == y;
  return std::abs(x - y) <= 1e-12;
}

bool shifted_equal(const ShiftSequence& alpha, const ShiftSequence& beta, int m) {
  const int lo = std::min(alpha.lo() - m, beta.lo()), hi = std::max(alpha.hi() - m, beta.hi());
  for (int n = lo; n <= hi; ++n)
    if (!same_value(beta.at(n), alpha.at(n + m))) return false;
  return true;
}

}  // namespace

std::optional<int> shift_equivalent(const ShiftSequence& alpha, const ShiftSequence& beta) {
  const int bound = 2 * std::max(alpha.half_width(), beta.half_width());
  for (int k = 0; k <= bound; ++k)
    for (int m : {k, -k}) {
      if (shifted_equal(alpha, beta, m)) return m;
      if (k == 0) break;
    }
  return std::nullopt;
}

CrosscheckReport family_isometry_crosscheck(const ShiftSequence& alpha, const ShiftSequence& beta,
                                            const IsometryOptions& opts) {
  CrosscheckReport out;
  out.shift = shift_equivalent(alpha, beta);
  out.isometry = brinkmann_isometry(family_metric(alpha), family_metric(beta), opts);
  const bool iso = out.isometry.verdict == Verdict::kIsometric;
  out.agree = out.isometry.verdict != Verdict::kInconclusive && iso == out.shift.has_value();
  if (out.isometry.witness) {
    const auto& w = *out.isometry.witness;
    out.epsilon = w.a > 0 ? 1 : -1;
    const double m = std::round(w.u0);
    const int bound = 2 * std::max(alpha.half_width(), beta.half_width());
    out.witness_matches_shift = std::abs(w.u0 - m) <= 1e-6 && std::abs(w.a - 1.0) <= 1e-6 &&
                                std::abs(m) <= bound &&
                                shifted_equal(alpha, beta, static_cast<int>(m));
  }
  require(out.agree, ErrorCode::kInconsistent,
          std::string("shift equivalence and isometry verdicts disagree: shift ") +
              (out.shift ? std::to_string(*out.shift) : "none") + ", isometry " +
              std::string(to_string(out.isometry.verdict)) + " (" + out.isometry.reason + ")");
  return out;
}

}  // namespace planewave
