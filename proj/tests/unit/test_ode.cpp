#include <cmath>

#include "doctest.h"
#include "planewave/error.hpp"
#include "planewave/ode.hpp"

using namespace planewave;

namespace {
Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
Mat one(double a) { return Mat::Constant(1, 1, a); }
Vec vec1(double a) { return Vec::Constant(1, a); }
}  // namespace

TEST_CASE("jacobi vector closed forms") {
  const auto zero = MatrixProfile::zero(2);
  Vec e1 = Vec::Zero(2);
  e1(0) = 1.0;
  auto c = solve_jacobi_vector(zero, 0.0, e1, Vec::Zero(2));
  auto l = solve_jacobi_vector(zero, 0.0, Vec::Zero(2), e1);
  for (double u : {-7.0, -1.0, 0.3, 5.0}) {
    CHECK((c.q(u) - e1).norm() < 1e-12);
    CHECK((l.q(u) - u * e1).norm() < 1e-10);
  }
  auto cosine = solve_jacobi_vector(MatrixProfile::constant(one(1.0)), 0.0, vec1(1), vec1(0));
  double worst = 0.0;
  for (double u = -10.0; u <= 10.0; u += 0.0137) {
    worst = std::max(worst, std::abs(cosine.q(u)(0) - std::cos(u)));
    worst = std::max(worst, std::abs(cosine.qdot(u)(0) + std::sin(u)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("dense output derivative matches the equation") {
  const auto p = MatrixProfile::constant(diag2(1.0, -1.0));
  Vec q0(2), q1(2);
  q0 << 1.0, 0.5;
  q1 << -0.2, 0.3;
  auto sol = solve_jacobi_vector(p, 0.0, q0, q1, {}, Interval{-3.0, 3.0});
  double worst = 0.0;
  for (double u = -3.0; u <= 3.0; u += 0.01) {
    const Vec d = sol.solution().eval(u, 1);
    const Vec qdd = d.tail(2);
    worst = std::max(worst, (qdd + p.eval(u) * sol.q(u)).norm() / (1.0 + sol.q(u).norm()));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("jacobi matrix") {
  auto m = solve_jacobi_matrix(MatrixProfile::constant(diag2(1.0, -1.0)), 0.0, Mat::Identity(2, 2),
                               Mat::Zero(2, 2), {}, Interval{-2.0, 2.0});
  for (double u : {-2.0, -0.5, 1.0, 2.0}) {
    CHECK((m.L(u) - diag2(std::cos(u), std::cosh(u))).norm() < 1e-9);
    CHECK(m.lagrangian_defect(u) < 1e-8);
  }
  auto lin = solve_jacobi_matrix(MatrixProfile::zero(2), 0.0, Mat::Zero(2, 2), Mat::Identity(2, 2));
  CHECK((lin.L(3.0) - 3.0 * Mat::Identity(2, 2)).norm() < 1e-10);
  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(solve_jacobi_matrix(MatrixProfile::zero(2), 0.0, Mat::Identity(2, 2), bad),
                  Error);
}

TEST_CASE("sachs blowup") {
  auto s = solve_sachs(MatrixProfile::zero(1), 0.0, one(1.0));
  REQUIRE(s.blowup_point().has_value());
  CHECK(std::abs(*s.blowup_point() + 1.0) < 1e-7);
  CHECK(std::abs(s.S(2.0)(0, 0) - 1.0 / 3.0) < 1e-10);
  auto t = solve_sachs(MatrixProfile::constant(one(1.0)), 0.0, one(0.0));
  REQUIRE(t.solution().blowup_above().has_value());
  CHECK(std::abs(*t.solution().blowup_above() - M_PI / 2) < 1e-7);
  CHECK(std::abs(*t.solution().blowup_below() + M_PI / 2) < 1e-7);
  CHECK(std::abs(t.S(1.0)(0, 0) + std::tan(1.0)) < 1e-9);
  auto z = solve_sachs(MatrixProfile::zero(2), 0.0, Mat::Zero(2, 2));
  CHECK(!z.blowup_point());
  CHECK(z.S(4.0).norm() == 0.0);
}

TEST_CASE("w equation") {
  auto flat = solve_w_equation(ScalarProfile::constant(0.0), 1.0, 0.0, 0.0, 2.0);
  CHECK(std::abs(flat.w(4.0) - 9.0) < 1e-9);
  const double c = 0.7;
  auto osc = solve_w_equation(ScalarProfile::constant(c), 0.0, 1.0, 0.0, 0.0);
  // w⃛ + 4cẇ = 0 with w(0)=1, ẇ(0)=ẅ(0)=0 gives w ≡ 1
  CHECK(std::abs(osc.w(3.0) - 1.0) < 1e-10);
  auto osc2 = solve_w_equation(ScalarProfile::constant(c), 0.0, 0.0, 1.0, 0.0);
  const double k = 2.0 * std::sqrt(c);
  for (double u : {-2.0, 0.5, 3.0}) CHECK(std::abs(osc2.w(u) - std::sin(k * u) / k) < 1e-9);
}

TEST_CASE("h inverse primitives") {
  auto id = integrate_h_inverse(MatrixProfile::constant(Mat::Identity(2, 2)), 0.0);
  CHECK((id.H(2.5) - 2.5 * Mat::Identity(2, 2)).norm() < 1e-10);
  auto d = integrate_h_inverse(MatrixProfile::constant(diag2(1.0, 4.0)), 0.0);
  CHECK((d.H(-2.0) - diag2(-2.0, -0.5)).norm() < 1e-10);
  auto e = integrate_h_inverse(
      MatrixProfile::scalar_times(ScalarProfile(ScalarProfile::Exponential{1.0, 2.0}), one(1.0)), 0.0);
  for (double u : {-1.0, 0.5, 2.0})
    CHECK(std::abs(e.H(u)(0, 0) - (1.0 - std::exp(-2.0 * u)) / 2.0) < 1e-10);
}

TEST_CASE("symplectic pairing is conserved") {
  const auto p = MatrixProfile::constant(diag2(1.0, -1.0));
  Vec a(2), b(2), c(2), d(2);
  a << 1, 2;
  b << 0.3, -1;
  c << -1, 0.5;
  d << 2, 0.1;
  auto q1 = solve_jacobi_vector(p, 0.0, a, b, {}, Interval{-3, 3});
  auto q2 = solve_jacobi_vector(p, 0.0, c, d, {}, Interval{-3, 3});
  const double w0 = a.dot(d) - c.dot(b);
  for (double u = -3; u <= 3; u += 0.1)
    CHECK(std::abs(q1.q(u).dot(q2.qdot(u)) - q2.q(u).dot(q1.qdot(u)) - w0) < 1e-8);
}
