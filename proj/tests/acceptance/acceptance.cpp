// Acceptance criteria 1-11. One line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "planewave/bernoulli.hpp"
#include "planewave/equivalence.hpp"
#include "planewave/error.hpp"
#include "planewave/forms.hpp"
#include "planewave/ode.hpp"
#include "planewave/shift_family.hpp"
#include "planewave/symmetries.hpp"

using namespace planewave;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED: " << what << ";";
    }
  }
};

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

Mat random_symmetric(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
  return m;
}

Mat random_matrix(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

double sup_error(const MatrixProfile& a, const MatrixProfile& b, const Interval& r) {
  double worst = 0.0;
  for (double u : r.uniform_grid(2001)) worst = std::max(worst, max_abs(a.eval(u) - b.eval(u)));
  return worst;
}

// Root of a monotone function on [lo, hi] by bisection to machine resolution.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// f_a minima against the closed form and the two endpoint values.
void criterion1(Outcome& o) {
  double worst = 0.0;
  for (double a : {0.0, 0.25, 0.5, 0.99}) {
    const double b = std::sqrt(9.0 - 8.0 * a);
    const double u_exact = (b + 1.0) / (b + 3.0);
    const double v_exact = std::pow(b + 3.0, 3) / (8.0 * (b + 1.0));
    const double u_num = bisect([a](double u) { return bump_exponent(a, u, 1); }, 1e-6, 1.0 - 1e-6);
    const double v_num = bump_exponent(a, u_num);
    const auto lib = bump_exponent_minimum(a);
    worst = std::max({worst, std::abs(u_num - u_exact), std::abs(v_num - v_exact),
                      std::abs(lib.u - u_exact), std::abs(lib.value - v_exact)});
    // no grid point beats the minimum
    for (int i = 1; i < 10000; ++i) {
      const double u = i / 10000.0;
      o.check(bump_exponent(a, u) >= v_exact - 1e-9, "grid value below the minimum");
      if (!o.pass) return;
    }
  }
  o.check(worst <= 1e-9, "minimum mismatch");
  const double at0 = bump_exponent_minimum(0.0).value;
  const double near1 = bump_exponent_minimum(1.0 - 1e-12).value;
  o.check(std::abs(at0 - 27.0 / 4.0) <= 1e-9, "a=0 endpoint");
  o.check(std::abs(near1 - 4.0) <= 1e-9, "a->1 endpoint");
  o.detail << " max_err=" << worst << " f_0=" << at0 << " f_(1-1e-12)=" << near1;
}

ShiftSequence random_sequence(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> d(0.0, 0.5);
  std::vector<double> v(static_cast<std::size_t>(2 * N + 1));
  for (auto& x : v) x = d(rng);
  return ShiftSequence::centered(v);
}

void criterion2(Outcome& o) {
  std::mt19937_64 rng(2);
  double zero_err = 0.0, half_err = 0.0, lo = 1.0, hi = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto alpha = random_sequence(rng, 8);
    for (int n = alpha.lo() - 3; n <= alpha.hi() + 3; ++n) {
      zero_err = std::max(zero_err, std::abs(family_profile(alpha, n)));
      half_err = std::max(half_err, std::abs(family_profile(alpha, n + 0.5) - std::exp(4.0 * alpha.at(n) - 4.0)));
    }
    for (int i = (alpha.lo() - 3) * 1000; i <= (alpha.hi() + 3) * 1000; ++i) {
      const double v = family_profile(alpha, i * 1e-3);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  o.check(zero_err <= 1e-12, "nonzero at integers");
  o.check(half_err <= 1e-12, "half-integer values");
  o.check(lo >= 0.0 && hi <= 1.0, "range outside [0,1]");
  o.detail << " zero_err=" << zero_err << " half_err=" << half_err << " range=[" << lo << "," << hi << "]";
}

// Witness convention: ū = a(u − u₀) maps G_α to G_β. With β = σᵐα this gives
// u₀ = +m; the reverse map G_β → G_α has u₀ = −m.
void criterion3(Outcome& o) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> shift(-5, 5);
  std::uniform_real_distribution<double> delta(0.05, 0.2);
  std::uniform_int_distribution<int> slot(0, 16);
  int agree = 0, equivalent = 0, witnesses = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto alpha = random_sequence(rng, 8);
    const int m = shift(rng);
    ShiftSequence beta = bernoulli_shift(alpha, m);
    const bool perturb = trial % 2 == 1;
    if (perturb) {
      auto v = beta.values();
      auto& x = v[static_cast<std::size_t>(slot(rng))];
      const double d = delta(rng);
      x = x + d <= 0.5 ? x + d : x - d;
      beta = ShiftSequence(beta.lo(), v);
    }
    const auto rep = family_isometry_crosscheck(alpha, beta);
    agree += rep.agree ? 1 : 0;
    if (!perturb) {
      o.check(rep.shift == m, "shift_equivalent returned the wrong m");
      ++equivalent;
      if (rep.isometry.witness) {
        const auto& w = *rep.isometry.witness;
        const auto back = invert(w);
        const bool ok = std::abs(w.a - 1.0) <= 1e-9 && std::abs(w.u0 - m) <= 1e-6 &&
                        std::abs(back.u0 + m) <= 1e-6;
        witnesses += ok ? 1 : 0;
      }
    } else {
      o.check(!rep.shift && rep.isometry.verdict == Verdict::kNotIsometric, "perturbed pair judged equivalent");
    }
  }
  o.check(agree == 100, "verdicts disagree");
  o.check(witnesses == equivalent, "witness is not a=1, u0=m (reverse u0=-m)");
  o.detail << " agree=" << agree << "/100 witnesses=" << witnesses << "/" << equivalent
           << " (forward u0=+m, reverse u0=-m)";
}

void criterion4(Outcome& o) {
  std::vector<MatrixProfile> cases{MatrixProfile::zero(2), MatrixProfile::constant(diag2(1, -1)),
                                   MatrixProfile::rotating_constant(0.7 * J2(), diag2(1, -1)),
                                   MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 0.9})};
  double sup = 0.0, pull = 0.0;
  for (const auto& p : cases) {
    const auto metric = BrinkmannMetric::make(p);
    const double u0 = p.domain().contains(0.0) ? 0.0 : p.domain().midpoint();
    const auto r = rosenize(metric, u0);
    const auto b = brinkmannize(r.metric, u0);
    sup = std::max(sup, sup_error(b.metric.p, p, b.working));
    pull = std::max({pull, r.residual, b.residual});
  }
  o.check(sup <= 1e-6, "round-trip sup error");
  o.check(pull <= 1e-7, "pullback residual");
  o.detail << " sup_err=" << sup << " pullback=" << pull;
}

void criterion5(Outcome& o) {
  std::vector<MatrixProfile> profiles{MatrixProfile::constant(diag2(1, -1)),
                                      MatrixProfile::rotating_constant(0.7 * J2(), diag2(2, -1)),
                                      MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 0.9})};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto rv = [&] {
    Vec v(2);
    v << d(rng), d(rng);
    return v;
  };
  double worst = 0.0;
  int pairs = 0;
  for (const auto& p : profiles) {
    const Interval range = p.domain().is_bounded() ? p.domain() : Interval{-3.0, 3.0};
    for (int k = 0; k < 20; ++k, ++pairs) {
      const double u0 = range.lo + (range.hi - range.lo) * (0.5 + 0.4 * d(rng));
      const auto q1 = solve_jacobi_vector(p, u0, rv(), rv(), {}, range);
      const auto q2 = solve_jacobi_vector(p, u0, rv(), rv(), {}, range);
      auto omega = [&](double u) { return q1.q(u).dot(q2.qdot(u)) - q2.q(u).dot(q1.qdot(u)); };
      const double base = omega(u0);
      for (double u : range.uniform_grid(401)) worst = std::max(worst, std::abs(omega(u) - base));
    }
  }
  o.check(worst <= 1e-8, "symplectic drift");
  o.detail << " pairs=" << pairs << " max_drift=" << worst;
}

void criterion6(Outcome& o) {
  const auto pl = extra_isometry(
      BrinkmannMetric::make(MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 0.9})));
  o.check(pl.status == ExtraIsometryReport::Status::kFound, "power law: no field");
  o.check(pl.nullity == 1, "power law: nullity");
  const double scale = std::abs(pl.a) > 0 ? pl.a : 1.0;
  o.check(std::abs(pl.b / scale - 1.0) <= 1e-6 && max_abs(pl.C) / std::abs(scale) <= 1e-6, "power law: not (1,1,0)");
  double residual = 0.0;
  const auto plm = BrinkmannMetric::make(MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 0.9}));
  if (pl.field) residual = std::max(residual, killing_residual(plm, *pl.field));

  const auto quad = BrinkmannMetric::make(MatrixProfile::callable(2, Symmetry::kSymmetric, Interval::real_line(),
                                                                  [](double u, int k) {
                                                                    const double a[] = {1 + u * u, 2 * u, 2.0, 0.0};
                                                                    return diag2(a[k], k == 0 ? -1.0 : 0.0);
                                                                  }));
  o.check(extra_isometry(quad).status == ExtraIsometryReport::Status::kNone, "quadratic: unexpected field");

  const auto flatm = BrinkmannMetric::make(MatrixProfile::zero(2));
  const auto flat = extra_isometry(flatm);
  o.check(flat.status == ExtraIsometryReport::Status::kFlatDegenerate && flat.dimension == 2, "flat: not degenerate 2-dim");
  if (flat.field) residual = std::max(residual, killing_residual(flatm, *flat.field));

  const auto rot = BrinkmannMetric::make(MatrixProfile::rotating_constant(0.7 * J2(), diag2(2, -1)));
  const auto rr = extra_isometry(rot);
  o.check(rr.status == ExtraIsometryReport::Status::kFound, "rotating constant: no field");
  if (rr.field) residual = std::max(residual, killing_residual(rot, *rr.field));
  o.check(residual <= 1e-7, "killing residual");
  o.detail << " power_law=(" << pl.a / scale << "," << pl.b / scale << "," << max_abs(pl.C) / std::abs(scale)
           << ") nullity=" << pl.nullity << " flat_dim=" << flat.dimension << " killing=" << residual;
}

bool center_is_H(const LieAlgebraReport& r) {
  if (r.derived_center.cols() != 1) return false;
  const Vec c = r.derived_center.col(0);
  return std::abs(c(0)) > 0 && (c.tail(c.size() - 1).cwiseAbs().maxCoeff() <= 1e-8 * std::abs(c(0)));
}

void criterion7(Outcome& o) {
  struct Case {
    std::string name;
    BrinkmannMetric metric;
    int expected;
  };
  std::vector<Case> cases{
      {"constant", BrinkmannMetric::make(MatrixProfile::constant(diag2(1, -1))), 7},
      {"quadratic",
       BrinkmannMetric::make(MatrixProfile::callable(2, Symmetry::kSymmetric, Interval::real_line(),
                                                     [](double u, int k) {
                                                       const double a[] = {1 + u * u, 2 * u, 2.0, 0.0};
                                                       return diag2(a[k], k == 0 ? -1.0 : 0.0);
                                                     })),
       6},
      {"power_law", BrinkmannMetric::make(MatrixProfile::power_law(1.0, 1.0, diag2(1, -1), Interval{0.0, 0.9})), 7},
      {"rotating", BrinkmannMetric::make(MatrixProfile::rotating_constant(0.7 * J2(), diag2(2, -1))), 7}};
  for (const auto& c : cases) {
    const auto r = conformal_algebra(c.metric);
    const int formula = 2 * r.n + 2 + (r.has_extra_symmetry ? 1 : 0) + r.lambda;
    o.check(r.dim == c.expected && r.dim == formula, c.name + " dimension");
    o.check(center_is_H(r), c.name + " center is not span H");
    o.detail << " " << c.name << "=" << r.dim << "(lambda=" << r.lambda << ")";
  }
  bool rejected = false;
  try {
    conformal_algebra(BrinkmannMetric::make(
        MatrixProfile::scalar_times(ScalarProfile::polynomial({1.0, 0.0, 1.0}), Mat::Identity(2, 2))));
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::kPrecondition;
  }
  o.check(rejected, "f(u)I accepted");
  o.detail << " f(u)I_rejected=" << (rejected ? "yes" : "no");
}

void criterion8(Outcome& o) {
  const auto metric = BrinkmannMetric::make(MatrixProfile::constant(diag2(2, -1)));
  const auto r = conformal_algebra(metric);
  o.check(r.has_extra_symmetry, "no V field");
  const auto& B = r.basis;
  const int n = r.n;
  const auto points = sample_points(Interval{-2.0, 2.0}, n, 10, 8);
  double fd = 0.0, table = 0.0;
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j) {
      const auto br = lie_bracket(B[i], B[j]);
      for (const auto& pt : points) {
        const Vec num = lie_bracket_fd(B[i], B[j], pt);
        fd = std::max(fd, (br.value(pt) - num).cwiseAbs().maxCoeff() / (1.0 + num.norm()));
      }
    }
  const auto& H = B[0];
  const auto& D = B[1];
  const auto dh = lie_bracket(D, H);
  table = std::max({table, std::abs(dh.b + 2.0), std::abs(dh.k)});
  for (int a = 0; a < 2 * n; ++a) {
    const auto& Xq = B[static_cast<std::size_t>(2 + a)];
    const auto dx = lie_bracket(D, Xq);
    for (const auto& pt : points) table = std::max(table, (dx.value(pt) + Xq.value(pt)).cwiseAbs().maxCoeff());
    for (int c = 0; c < 2 * n; ++c) {
      const auto& Xr = B[static_cast<std::size_t>(2 + c)];
      const double u = 0.3;
      const double w = Xq.q_at(u).dot(Xr.qdot_at(u)) - Xr.q_at(u).dot(Xq.qdot_at(u));
      const auto xx = lie_bracket(Xq, Xr);
      for (const auto& pt : points)
        table = std::max(table, (xx.value(pt) - w * H.value(pt)).cwiseAbs().maxCoeff());
    }
    const auto& V = B.back();
    const auto xv = lie_bracket(Xq, V);
    for (const auto& pt : points) {
      const double u = pt.u;
      const Vec expected_q = 0.5 * V.w_at(u, 1) * Xq.q_at(u) - V.w_at(u) * Xq.qdot_at(u) + V.W * Xq.q_at(u);
      table = std::max(table, (xv.q_at(u) - expected_q).cwiseAbs().maxCoeff());
    }
  }
  o.check(fd <= 1e-6, "finite-difference brackets");
  o.check(table <= 1e-6, "structured table");
  o.detail << " fields=" << B.size() << " fd_err=" << fd << " table_err=" << table;
}

void criterion9(Outcome& o) {
  std::mt19937_64 rng(9);
  double param = 0.0, pull = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Mat P0 = random_symmetric(rng, 2, 2.0);
    const Mat w = std::uniform_real_distribution<double>(-1.5, 1.5)(rng) * J2();
    const auto ab = alekseevsky_to_brinkmann(
        AlekseevskyMetric::make(MatrixProfile::constant(P0), MatrixProfile::constant(w, Symmetry::kSkew)));
    const auto back = brinkmann_to_alekseevsky(ab.metric);
    const double tol = 1.0 + max_abs(P0);
    param = std::max({param, max_abs(back.metric.p.eval(0.0) - P0) / tol, max_abs(back.metric.omega.eval(0.0) - w)});
    pull = std::max({pull, ab.residual, back.residual});
  }
  o.check(param <= 1e-14, "parameters not recovered");
  o.check(pull <= 1e-9, "pullback residual");
  o.detail << " param_err=" << param << " pullback=" << pull;
}

// h = AᵀA with A = I + uB + u²C on [0, 1].
MatrixProfile random_rosen_profile(std::mt19937_64& rng) {
  for (;;) {
    const Mat B = random_matrix(rng, 2, 0.4), C = random_matrix(rng, 2, 0.3);
    bool ok = true;
    for (int i = 0; i <= 100 && ok; ++i) {
      const double u = i / 100.0;
      const Mat A = Mat::Identity(2, 2) + u * B + u * u * C;
      ok = std::abs(A.determinant()) > 0.2;
    }
    if (!ok) continue;
    return MatrixProfile::callable(2, Symmetry::kSymmetric, Interval{0.0, 1.0}, [B, C](double u, int k) -> Mat {
      const Mat A = Mat::Identity(2, 2) + u * B + u * u * C;
      const Mat A1 = B + 2 * u * C;
      const Mat A2 = 2 * C;
      switch (k) {
        case 0: return A.transpose() * A;
        case 1: return A1.transpose() * A + A.transpose() * A1;
        case 2: return A2.transpose() * A + 2 * A1.transpose() * A1 + A.transpose() * A2;
        default: return 3 * (A2.transpose() * A1 + A1.transpose() * A2);
      }
    });
  }
}

void criterion10(Outcome& o) {
  std::mt19937_64 rng(10);
  int recovered = 0, trials = 0;
  double worst = 0.0;
  while (trials < 10) {
    const auto h = random_rosen_profile(rng);
    const Mat E = random_symmetric(rng, 2, 0.4);
    std::optional<RosenTransformResult> t;
    try {
      t.emplace(rosen_transform(h, E, 0.0));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSingular) continue;
      throw;
    }
    ++trials;
    const auto r = rosen_isomorphic(RosenMetric::make(h), RosenMetric::make(t->h_bar));
    if (r.verdict == Verdict::kIsometric && r.residual <= 1e-6) ++recovered;
    worst = std::max(worst, r.verdict == Verdict::kIsometric ? r.residual : INFINITY);
  }
  o.check(recovered == trials, "witness not recovered");
  o.detail << " recovered=" << recovered << "/" << trials << " max_residual=" << worst;
}

void criterion11(Outcome& o) {
  std::mt19937_64 rng(11);
  double param = 0.0, residual = 0.0;
  for (int t = 0; t < 5; ++t) {
    Mat P0 = random_symmetric(rng, 2, 2.0);
    P0(0, 0) += 2.0;  // keep the trace-free part away from zero
    P0(1, 1) -= 2.0;
    const Mat w = std::uniform_real_distribution<double>(0.2, 1.5)(rng) * J2();
    const auto nf = microcosm_normal_form(BrinkmannMetric::make(MatrixProfile::rotating_constant(w, P0)));
    const Mat target = P0 + w * w;
    param = std::max({param, max_abs(nf.omega - w), max_abs(nf.p - target) / (1.0 + max_abs(target))});
    residual = std::max(residual, nf.residual);
  }
  o.check(param <= 1e-12, "parameters not exact");
  o.check(residual <= 1e-6, "verification pullback");
  o.detail << " param_err=" << param << " residual=" << residual;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    void (*run)(Outcome&);
    double budget_s;
  };
  const Criterion all[] = {
      {1, "f_a minima", criterion1, 1.0},
      {2, "p_alpha structure", criterion2, 5.0},
      {3, "shift and isometry crosscheck (100 trials)", criterion3, 60.0},
      {4, "conversion round trips", criterion4, 30.0},
      {5, "symplectic conservation", criterion5, 0.0},
      {6, "extra-isometry detector", criterion6, 0.0},
      {7, "conformal algebra dimensions", criterion7, 0.0},
      {8, "commutator table", criterion8, 0.0},
      {9, "Alekseevsky/Brinkmann identity", criterion9, 0.0},
      {10, "Rosen normal form", criterion10, 0.0},
      {11, "microcosm normal form", criterion11, 0.0},
  };
  int failures = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) {
      o.check(secs < c.budget_s, "runtime over budget");
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s (%.2fs):%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(all)) - failures, std::size(all));
  return failures == 0 ? 0 : 1;
}
