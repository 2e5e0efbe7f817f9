#include <cmath>
#include <random>

#include "doctest.h"
#include "planewave/error.hpp"
#include "planewave/shift_family.hpp"

using namespace planewave;

namespace {
ShiftSequence random_sequence(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> d(0.0, 0.5);
  std::vector<double> v(static_cast<std::size_t>(2 * N + 1));
  for (auto& x : v) x = d(rng);
  return ShiftSequence::centered(v);
}
}  // namespace

TEST_CASE("bump exponent and bump") {
  CHECK(bump_exponent(0.0, 0.5) == doctest::Approx(8.0));
  CHECK(bump(0.3, -3.0) == 1.0);
  CHECK(bump(0.3, 2.0) == 1.0);
  CHECK(bump(0.0, 0.5) == doctest::Approx(1.0 + std::exp(-4.0)).epsilon(1e-14));
  const auto m0 = bump_exponent_minimum(0.0);
  CHECK(m0.value == doctest::Approx(27.0 / 4.0));
  CHECK(m0.u == doctest::Approx(2.0 / 3.0));
  // a → 1 approaches 4 at u = 1/2
  const auto m1 = bump_exponent_minimum(1.0 - 1e-9);
  CHECK(m1.value == doctest::Approx(4.0).epsilon(1e-6));
  // brute-force minimum agrees with the closed form
  for (double a : {0.0, 0.25, 0.5, 0.99}) {
    double best = 1e300;
    for (int i = 1; i < 200000; ++i) best = std::min(best, bump_exponent(a, i / 200000.0));
    CHECK(best == doctest::Approx(bump_exponent_minimum(a).value).epsilon(1e-8));
  }
  // derivatives against central differences
  for (double u : {0.2, 0.5, 0.8})
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-5;
      const double fd = (bump(0.3, u + h, k) - bump(0.3, u - h, k)) / (2 * h);
      CHECK(bump(0.3, u, k + 1) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("family profile structure") {
  std::mt19937_64 rng(42);
  const auto alpha = random_sequence(rng, 4);
  for (int n = -8; n <= 8; ++n) CHECK(std::abs(family_profile(alpha, n)) <= 1e-12);
  for (int n = -4; n <= 4; ++n)
    CHECK(family_profile(alpha, n + 0.5) ==
          doctest::Approx(std::exp(4 * alpha.at(n) - 4)).epsilon(1e-12));
  for (double u = -6.0; u <= 6.0; u += 1e-3) {
    const double p = family_profile(alpha, u);
    CHECK_MESSAGE((p >= 0.0 && p <= 1.0), u);
    const double fl = std::floor(u);
    if (u != fl) CHECK(p == bump(alpha.at(static_cast<int>(fl)), u - fl) - 1.0);
  }
  // continuity modulus: one-index change δ moves the unit interval by ≥ 4e⁻⁴δ
  for (double delta : {0.1, 0.2, 0.4}) {
    const auto a = ShiftSequence::centered({0.0, 0.05, 0.0});
    const auto b = ShiftSequence::centered({0.0, 0.05 + delta, 0.0});
    double sup = 0.0;
    for (double u = 0.0; u <= 1.0; u += 1e-4)
      sup = std::max(sup, std::abs(family_profile(a, u) - family_profile(b, u)));
    CHECK(sup >= 4 * std::exp(-4.0) * delta);
  }
}

TEST_CASE("family metric") {
  const auto zero = ShiftSequence::centered({0.0, 0.0, 0.0});
  const auto m = family_metric(zero);
  CHECK(max_abs(m.p.eval(0.5) - std::exp(-4.0) * Mat(Eigen::Vector2d(1, -1).asDiagonal())) < 1e-15);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5; ++i) {
    const auto fm = family_metric(random_sequence(rng, 3));
    CHECK(is_vacuum(fm));
    CHECK(!is_flat(fm));
  }
}

TEST_CASE("bernoulli shift and distance") {
  const auto a = ShiftSequence::centered({0.0, 0.25, 0.0});
  const auto s = bernoulli_shift(a, 1);
  CHECK(s.at(-1) == 0.25);
  CHECK(s.at(0) == 0.0);
  CHECK(bernoulli_shift(a, 0) == a);
  CHECK(bernoulli_shift(bernoulli_shift(a, 2), -2) == a);
  CHECK_THROWS_AS(bernoulli_shift(a, 3), Error);

  CHECK(hilbert_distance(a, a, 30).value == 0.0);
  const double delta = 0.2;
  const auto b = ShiftSequence::centered({0.0, 0.25 + delta, 0.0});
  const auto d = hilbert_distance(a, b, 40);
  CHECK(d.value == doctest::Approx(2 * delta / (1 + delta)).epsilon(1e-10));
  CHECK(d.truncation_bound == std::ldexp(1.0, -40));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i)
    CHECK(hilbert_distance(random_sequence(rng, 3), random_sequence(rng, 5), 30).value <= 2.0);
}

TEST_CASE("shift equivalence") {
  std::mt19937_64 rng(11);
  const auto a = random_sequence(rng, 4);
  CHECK(shift_equivalent(a, bernoulli_shift(a, 3)) == 3);
  CHECK(shift_equivalent(a, bernoulli_shift(a, -5)) == -5);
  CHECK(shift_equivalent(a, a) == 0);
  auto v = a.values();
  v[2] = std::min(0.5, v[2] + 0.1) == v[2] ? v[2] - 0.1 : std::min(0.5, v[2] + 0.1);
  CHECK(!shift_equivalent(a, ShiftSequence(a.lo(), v)));
  // dyadic inputs compare exactly
  const auto d = ShiftSequence::centered({0.125, 0.25, 0.5});
  CHECK(shift_equivalent(d, bernoulli_shift(d, 1)) == 1);
}

TEST_CASE("family crosscheck") {
  std::mt19937_64 rng(5);
  const auto a = random_sequence(rng, 4);
  const auto shifted = family_isometry_crosscheck(a, bernoulli_shift(a, 3));
  CHECK(shifted.shift == 3);
  REQUIRE(shifted.isometry.witness);
  CHECK(shifted.isometry.witness->a == doctest::Approx(1.0));
  CHECK(shifted.isometry.witness->u0 == doctest::Approx(3.0));
  CHECK(shifted.epsilon == 1);
  CHECK(shifted.witness_matches_shift);

  auto v = a.values();
  v[4] = v[4] > 0.25 ? v[4] - 0.1 : v[4] + 0.1;
  const auto perturbed = family_isometry_crosscheck(a, ShiftSequence(a.lo(), v));
  CHECK(!perturbed.shift);
  CHECK(perturbed.isometry.verdict == Verdict::kNotIsometric);

  const auto same = family_isometry_crosscheck(a, a);
  CHECK(same.shift == 0);
  REQUIRE(same.isometry.witness);
  CHECK(same.isometry.witness->u0 == doctest::Approx(0.0).epsilon(1e-9));
}
