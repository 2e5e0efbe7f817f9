#include <cmath>
#include <random>

#include "doctest.h"
#include "planewave/error.hpp"
#include "planewave/profile.hpp"

using namespace planewave;

namespace {
Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
Mat J2() {
  Mat w(2, 2);
  w << 0, 1, -1, 0;
  return w;
}
Mat expm_skew2(double t) {
  // e^{tJ} for J = [[0,1],[-1,0]]
  Mat r(2, 2);
  r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return r;
}

std::vector<MatrixProfile> closed_form_profiles() {
  return {MatrixProfile::constant(diag2(1, -1)),
          MatrixProfile::rotating_constant(0.7 * J2(), diag2(2, -1)),
          MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{-1.0, 0.9}),
          MatrixProfile::scalar_times(ScalarProfile(ScalarProfile::Cosine{1.5, 2.0, 0.3}), diag2(1, 3)),
          MatrixProfile::bernoulli_family(ShiftSequence::centered({0.1, 0.4, 0.25})),
          MatrixProfile::sum({MatrixProfile::constant(Mat::Identity(2, 2)),
                              MatrixProfile::scalar_times(ScalarProfile::polynomial({0, 1, 2}), J2() * J2())}),
          MatrixProfile::constant(J2())};
}
}  // namespace

TEST_CASE("evaluation examples") {
  const auto c = MatrixProfile::constant(diag2(1, -1));
  CHECK(max_abs(c.eval(0.7) - diag2(1, -1)) == 0.0);
  CHECK(max_abs(c.eval(0.7, 1)) == 0.0);
  const auto r = MatrixProfile::rotating_constant(J2(), diag2(1, -1));
  CHECK(max_abs(r.eval(M_PI / 2) - diag2(-1, 1)) < 1e-14);
  // rotation by an arbitrary angle against the explicit rotation matrix
  for (double u : {-1.3, 0.2, 2.9}) {
    const Mat expected = expm_skew2(-u) * diag2(1, -1) * expm_skew2(u);
    CHECK(max_abs(r.eval(u) - expected) < 1e-13);
  }
  CHECK_THROWS_AS(c.eval(0.0, 4), Error);
  const auto pl = MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 0.9});
  CHECK(max_abs(pl.eval(0.5) - 4.0 * diag2(1, -1)) < 1e-13);
  CHECK_THROWS_AS(pl.eval(0.95), Error);
  CHECK_THROWS_AS(MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 2.0}), Error);
  const auto fam = MatrixProfile::bernoulli_family(ShiftSequence::centered({0.5}));
  CHECK(max_abs(fam.eval(0.5) - std::exp(-2.0) * diag2(1, -1)) < 1e-15);
  CHECK(max_abs(fam.eval(3.5) - std::exp(-4.0) * diag2(1, -1)) < 1e-15);
  CHECK(max_abs(fam.eval(3.0)) == 0.0);
}

TEST_CASE("derivatives match central differences") {
  const double h = 1e-4;
  for (const auto& p : closed_form_profiles()) {
    const bool steep = std::holds_alternative<profile_kind::BernoulliFamily>(p.variant());
    const Interval r = p.sampling_range();
    for (double t : {0.13, 0.37, 0.61, 0.88}) {
      const double u = r.lo + t * (r.hi - r.lo);
      for (int k = 1; k <= 3; ++k) {
        INFO("variant " << p.variant().index() << " u=" << u << " k=" << k);
        auto central = [&](double step) {
          return Mat((p.eval(u + step, k - 1) - p.eval(u - step, k - 1)) / (2 * step));
        };
        const Mat fd = central(h);
        // fourth-order extrapolation; the Bernoulli bumps have derivatives of order 1e5
        // beyond the third, which swamps the plain O(h²) estimate
        const Mat richardson = (4.0 * central(h / 2) - fd) / 3.0;
        CHECK(max_abs(p.eval(u, k) - richardson) <= 1e-6 * (1.0 + max_abs(richardson)));
        if (!steep) CHECK(max_abs(p.eval(u, k) - fd) <= 1e-6 * (1.0 + max_abs(fd)));
      }
    }
  }
}

TEST_CASE("symmetry type is preserved") {
  for (const auto& p : closed_form_profiles()) {
    const double sign = p.symmetry() == Symmetry::kSymmetric ? 1.0 : -1.0;
    for (double u : p.sample_grid(101))
      for (int k = 0; k <= 3; ++k) {
        const Mat m = p.eval(u, k);
        CHECK((m - sign * m.transpose()).norm() <= 1e-10 * (1.0 + m.norm()));
      }
  }
  CHECK(MatrixProfile::constant(J2()).symmetry() == Symmetry::kSkew);
  CHECK_THROWS_AS(MatrixProfile::constant(J2(), Symmetry::kSymmetric), Error);
}

TEST_CASE("trace decomposition") {
  auto a = trace_decompose(diag2(1, -1));
  CHECK(max_abs(a.trace_free - diag2(1, -1)) == 0.0);
  CHECK(a.trace_part == 0.0);
  auto b = trace_decompose(Mat::Identity(2, 2));
  CHECK(max_abs(b.trace_free) == 0.0);
  CHECK(b.trace_part == 1.0);
  auto c = trace_decompose(diag2(3, 1));
  CHECK(max_abs(c.trace_free - diag2(1, -1)) == 0.0);
  CHECK(c.trace_part == 2.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int t = 0; t < 20; ++t) {
    Mat m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = d(rng);
    const auto td = trace_decompose(m);
    CHECK(std::abs(td.trace_free.trace()) < 1e-14);
    CHECK(max_abs(td.trace_free + td.trace_part * Mat::Identity(3, 3) - m) < 1e-14);
    CHECK(max_abs(trace_decompose(td.trace_free).trace_free - td.trace_free) < 1e-15);
  }
  CHECK_THROWS_AS(trace_decompose(J2() + Mat::Identity(2, 2)), Error);
}

TEST_CASE("seminorms") {
  CHECK(seminorm(MatrixProfile::constant(diag2(1, -1)), 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(seminorm(MatrixProfile::zero(2), 3) == 0.0);

  // brute force on a grid ten times finer
  const ShiftSequence half = ShiftSequence::centered(std::vector<double>(7, 0.5));
  const auto fam = MatrixProfile::bernoulli_family(half);
  double oracle = 0.0;
  for (int i = -10000; i <= 10000; ++i) {
    const double u = i * 1e-4;
    oracle = std::max(oracle, std::sqrt(2.0) * (std::abs(family_profile(half, u)) + std::abs(family_profile(half, u, 1))));
  }
  const double value = seminorm(fam, 1);
  CHECK(value <= oracle * (1 + 1e-12));
  CHECK(value == doctest::Approx(oracle).epsilon(1e-4));

  CHECK_THROWS_AS(seminorm(MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 0.9}), 1), Error);
}

TEST_CASE("cubic spline") {
  // not-a-knot reproduces cubics exactly
  std::vector<double> x, y;
  for (int i = 0; i <= 12; ++i) {
    const double u = -1.0 + 0.25 * i + 0.01 * (i % 3);
    x.push_back(u);
    y.push_back(1 - 2 * u + 0.5 * u * u + u * u * u);
  }
  const CubicSpline s(x, y);
  for (double u : {-0.9, -0.2, 0.33, 1.7}) {
    CHECK(s.eval(u, 0) == doctest::Approx(1 - 2 * u + 0.5 * u * u + u * u * u).epsilon(1e-12));
    CHECK(s.eval(u, 1) == doctest::Approx(-2 + u + 3 * u * u).epsilon(1e-11));
    CHECK(s.eval(u, 2) == doctest::Approx(1 + 6 * u).epsilon(1e-10));
    CHECK(s.eval(u, 3) == doctest::Approx(6.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(CubicSpline({0.0, 1.0, 1.0}, {0, 1, 2}), Error);

  // sampled matrix profile converges on a smooth function
  std::vector<double> grid;
  std::vector<Mat> vals;
  for (int i = 0; i <= 400; ++i) {
    const double u = -2.0 + 0.01 * i;
    grid.push_back(u);
    vals.push_back(diag2(std::sin(u), std::cos(u)));
  }
  const auto p = MatrixProfile::sampled(grid, vals);
  CHECK(p.domain() == Interval{-2.0, 2.0});
  for (double u : {-1.234, 0.0, 1.5}) {
    CHECK(max_abs(p.eval(u) - diag2(std::sin(u), std::cos(u))) < 1e-8);
    CHECK(max_abs(p.eval(u, 1) - diag2(std::cos(u), -std::sin(u))) < 1e-6);
  }
}

TEST_CASE("scalar profiles") {
  const ScalarProfile e(ScalarProfile::Exponential{2.0, -0.5});
  CHECK(e.eval(1.0, 2) == doctest::Approx(2.0 * 0.25 * std::exp(-0.5)));
  const ScalarProfile ch(ScalarProfile::HyperbolicCosine{1.0, 2.0, 0.1});
  CHECK(ch.eval(0.3, 3) == doctest::Approx(8.0 * std::sinh(0.7)));
  const ScalarProfile pw(ScalarProfile::PowerLaw{3.0, 1.0, 2.0, -2.0}, Interval{-1.0, 0.4});
  CHECK(pw.eval(0.0) == doctest::Approx(3.0));
  CHECK(pw.eval(0.0, 1) == doctest::Approx(12.0));
  CHECK(ScalarProfile::polynomial({1, 2, 3, 4}).eval(2.0, 3) == doctest::Approx(24.0));
}
