#include "planewave/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "planewave/error.hpp"

namespace planewave {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kIsometric: return "isometric";
    case Verdict::kNotIsometric: return "not_isometric";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

IsometryWitness invert(const IsometryWitness& w) {
  IsometryWitness out = w;
  out.a = 1.0 / w.a;
  out.u0 = -w.a * w.u0;
  out.gamma = w.gamma.transpose();
  out.composed_with = std::nullopt;
  return out;
}

IsometryWitness compose(const IsometryWitness& outer, const IsometryWitness& inner) {
  IsometryWitness out;
  out.a = outer.a * inner.a;
  out.u0 = inner.u0 + outer.u0 / inner.a;
  out.gamma = outer.gamma * inner.gamma;
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double affine(double a, double u0, double u) { return a * (u - u0); }

double rel_deviation(const Mat& lhs, const Mat& rhs) {
  return max_abs(lhs - rhs) / (1.0 + max_abs(rhs));
}

// Image of an interval under u ↦ a(u − u0).
Interval affine_image(const Interval& d, double a, double u0) {
  const double x = std::isfinite(d.lo) ? affine(a, u0, d.lo) : (a > 0 ? -kInf : kInf);
  const double y = std::isfinite(d.hi) ? affine(a, u0, d.hi) : (a > 0 ? kInf : -kInf);
  return {std::min(x, y), std::max(x, y)};
}

bool same_end(double x, double y) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  return std::abs(x - y) <= 1e-6 * (1.0 + std::abs(x));
}

bool domains_match(const Interval& d1, const Interval& d2, double a, double u0) {
  const Interval im = affine_image(d1, a, u0);
  return same_end(im.lo, d2.lo) && same_end(im.hi, d2.hi);
}

// Preimage of an interval under u ↦ a(u − u0).
Interval affine_preimage(const Interval& d, double a, double u0) {
  const double x = d.lo / a + u0, y = d.hi / a + u0;
  return {std::min(x, y), std::max(x, y)};
}

Interval hull(const Interval& x, const Interval& y) {
  return {std::min(x.lo, y.lo), std::max(x.hi, y.hi)};
}

// Range on which a candidate is checked: both sampling windows, pulled back to pm1's chart.
Interval check_range(const BrinkmannMetric& m1, const BrinkmannMetric& m2, double a, double u0) {
  Interval r = hull(m1.p.sampling_range(), affine_preimage(m2.p.sampling_range(), a, u0));
  r = r.intersect(m1.p.domain()).intersect(affine_preimage(m2.p.domain(), a, u0));
  return r;
}

double trace_power(const Mat& p, int k) {
  Mat m = p;
  for (int i = 1; i < k; ++i) m = m * p;
  return m.trace();
}

// I₂ = tr p² and its first two derivatives.
std::array<double, 3> i2_jet(const MatrixProfile& p, double u) {
  const Mat p0 = p.eval(u), p1 = p.eval(u, 1), p2 = p.eval(u, 2);
  return {(p0 * p0).trace(), 2.0 * (p0 * p1).trace(), 2.0 * (p1 * p1 + p0 * p2).trace()};
}

struct Feature {
  double u;
  bool maximum;
};

// Interior extrema of I₂ on the sampling window, located by bisection on I₂'.
std::vector<Feature> i2_features(const MatrixProfile& p, int grid) {
  const Interval r = p.sampling_range();
  const auto us = r.uniform_grid(grid);
  std::vector<double> d(us.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const auto j = i2_jet(p, us[i]);
    d[i] = j[1];
    scale = std::max(scale, std::abs(j[0]));
  }
  // derivative noise of a constant invariant is not a feature
  scale = 1e-9 * (1.0 + scale);
  for (double& x : d)
    if (std::abs(x) <= scale) x = 0.0;
  std::vector<Feature> out;
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    // a sign change, possibly across one exact zero
    std::size_t j = i + 1;
    if (d[j] == 0.0 && j + 1 < us.size()) ++j;
    if (!(d[i] * d[j] < 0.0)) continue;
    double lo = us[i], hi = us[j], flo = d[i];
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = i2_jet(p, mid)[1];
      if ((fm < 0) == (flo < 0)) lo = mid, flo = fm;
      else hi = mid;
    }
    out.push_back({0.5 * (lo + hi), d[i] > 0.0});
  }
  return out;
}

// |a| from I₂¹⁽ᵏ⁾(x) = a^{4+k} I₂²⁽ᵏ⁾(y) at the first jointly nonvanishing order.
std::optional<double> scale_from_pair(const MatrixProfile& p1, double x, const MatrixProfile& p2,
                                      double y, int sign) {
  const auto j1 = i2_jet(p1, x), j2 = i2_jet(p2, y);
  const double s1 = 1e-10 * (1.0 + std::abs(j1[0])), s2 = 1e-10 * (1.0 + std::abs(j2[0]));
  for (int k = 0; k < 3; ++k) {
    const bool z1 = std::abs(j1[static_cast<std::size_t>(k)]) <= s1;
    const bool z2 = std::abs(j2[static_cast<std::size_t>(k)]) <= s2;
    if (z1 != z2) return std::nullopt;
    if (z1) continue;
    const double r = j1[static_cast<std::size_t>(k)] / j2[static_cast<std::size_t>(k)];
    const double want = (k % 2 == 0) ? 1.0 : static_cast<double>(sign);
    if (r * want <= 0.0) return std::nullopt;
    return std::pow(std::abs(r), 1.0 / (4.0 + k));
  }
  return std::nullopt;
}

struct Candidate {
  double a, u0;
};

void add_candidate(std::vector<Candidate>& out, double a, double u0) {
  for (const auto& c : out)
    if (std::abs(c.a - a) <= 1e-7 * std::abs(a) && std::abs(c.u0 - u0) <= 1e-7 * (1.0 + std::abs(u0)))
      return;
  out.push_back({a, u0});
}

// Necessary conditions: I_k(u) = a^{2k} Ī_k(ū) for k = 1, 2, 3 at a few points.
bool invariants_match(const BrinkmannMetric& m1, const BrinkmannMetric& m2, const Candidate& c,
                      const std::vector<double>& us) {
  for (double u : us) {
    const Mat p1 = m1.p.eval(u);
    const Mat p2 = c.a * c.a * m2.p.eval(affine(c.a, c.u0, u));
    const double scale = 1.0 + max_abs(p1);
    for (int k = 1; k <= 3; ++k) {
      const double s = std::pow(scale, k) * m1.n();
      if (std::abs(trace_power(p1, k) - trace_power(p2, k)) > 1e-5 * s) return false;
    }
  }
  return true;
}

// I₁, I₂, I₃ constant on the sampling window: then the invariant screen does not depend on u0.
bool invariants_constant(const MatrixProfile& p) {
  const auto us = p.sampling_range().uniform_grid(257);
  const Mat p0 = p.eval(us.front());
  for (int k = 1; k <= 3; ++k) {
    const double ref = trace_power(p0, k);
    const double tol = 1e-9 * std::pow(1.0 + max_abs(p0), k) * p.dim();
    for (double u : us)
      if (std::abs(trace_power(p.eval(u), k) - ref) > tol) return false;
  }
  return true;
}

std::vector<double> check_grid(const BrinkmannMetric& m1, const Interval& r, int grid) {
  auto us = r.uniform_grid(grid);
  for (double k : m1.p.knots())
    if (k > r.lo && k < r.hi) us.push_back(k);
  std::sort(us.begin(), us.end());
  return us;
}

}  // namespace

double witness_grid_error(const BrinkmannMetric& pm1, const BrinkmannMetric& pm2,
                          const IsometryWitness& w, const Interval& range, int grid) {
  double worst = 0.0;
  for (double u : check_grid(pm1, range, grid)) {
    const Mat lhs = w.a * w.a * w.gamma.transpose() * pm2.p.eval(affine(w.a, w.u0, u)) * w.gamma;
    worst = std::max(worst, rel_deviation(lhs, pm1.p.eval(u)));
  }
  return worst;
}

IsometryResult brinkmann_isometry(const BrinkmannMetric& pm1, const BrinkmannMetric& pm2,
                                  const IsometryOptions& opts) {
  IsometryResult out;
  const int n = pm1.n();
  if (n != pm2.n()) {
    out.reason = "transverse dimensions differ";
    return out;
  }
  const bool flat1 = is_flat(pm1), flat2 = is_flat(pm2);
  if (flat1 || flat2) {
    if (flat1 && flat2) {
      out.verdict = Verdict::kIsometric;
      out.witness = IsometryWitness{1.0, 0.0, Mat::Identity(n, n), std::string("flat"), 0.0, 0.0};
      out.reason = "both metrics are flat";
    } else {
      out.reason = "exactly one metric is flat";
    }
    return out;
  }

  const Interval d1 = pm1.p.domain(), d2 = pm2.p.domain();
  const int inf1 = std::isinf(d1.lo) + std::isinf(d1.hi), inf2 = std::isinf(d2.lo) + std::isinf(d2.hi);
  if (inf1 != inf2) {
    out.reason = "domains are not affinely equivalent";
    return out;
  }

  std::vector<Candidate> cands;
  bool featureless = false;
  if (inf1 == 0) {
    // endpoints must align
    for (int s : {1, -1}) {
      const double a = s * d2.length() / d1.length();
      add_candidate(cands, a, s > 0 ? d1.lo - d2.lo / a : d1.lo - d2.hi / a);
    }
  } else {
    const auto f1 = i2_features(pm1.p, 4001), f2 = i2_features(pm2.p, 4001);
    std::vector<int> signs{1, -1};
    if (inf1 == 1) signs = {(std::isinf(d1.hi) == std::isinf(d2.hi)) ? 1 : -1};
    auto add_from_pair = [&](double x, double y, int s) {
      const auto mag = scale_from_pair(pm1.p, x, pm2.p, y, s);
      if (!mag) return;
      const double a = s * *mag;
      const double u0 = x - y / a;
      if (domains_match(d1, d2, a, u0)) add_candidate(cands, a, u0);
    };
    if (inf1 == 1) {
      // the finite ends correspond
      const double x = std::isfinite(d1.lo) ? d1.lo : d1.hi;
      const double y = std::isfinite(d2.lo) ? d2.lo : d2.hi;
      for (int s : signs) {
        add_from_pair(x, y, s);
        for (const auto& g : f1)
          for (const auto& h : f2)
            if (g.maximum == h.maximum) add_from_pair(g.u, h.u, s);
      }
      // fall back to interior features alone when the end values vanish
      std::erase_if(cands, [&](const Candidate& c) {
        const double xe = std::isfinite(d1.lo) ? d1.lo : d1.hi;
        const double ye = std::isfinite(d2.lo) ? d2.lo : d2.hi;
        return !same_end(affine(c.a, c.u0, xe), ye);
      });
    } else if (f1.empty() && f2.empty()) {
      featureless = true;
      const double x = pm1.p.sampling_range().midpoint(), y = pm2.p.sampling_range().midpoint();
      for (int s : signs) add_from_pair(x, y, s);
      for (auto& c : cands) c.u0 = 0.0;
    } else if (f1.empty() != f2.empty()) {
      out.reason = "invariant tr p² has extrema for only one metric";
      return out;
    } else {
      for (int s : signs)
        for (const auto& g : f1)
          for (const auto& h : f2)
            if (g.maximum == h.maximum) add_from_pair(g.u, h.u, s);
    }
  }
  out.candidates = static_cast<int>(cands.size());

  bool degenerate = false, screened_out = true;
  for (const auto& c : cands) {
    const Interval range = check_range(pm1, pm2, c.a, c.u0);
    if (!(range.length() > 0.0)) continue;
    if (!invariants_match(pm1, pm2, c, range.uniform_grid(64))) continue;
    screened_out = false;
    const auto grid = check_grid(pm1, range, opts.grid);

    // probe points with simple spectrum
    std::vector<Mat> gammas;
    const auto probes = range.uniform_grid(opts.max_probes + 2);
    bool aligned = false;
    for (std::size_t i = 1; i + 1 < probes.size() && !aligned; ++i) {
      const double u = probes[i];
      Eigen::SelfAdjointEigenSolver<Mat> e1(pm1.p.eval(u));
      Eigen::SelfAdjointEigenSolver<Mat> e2(c.a * c.a * pm2.p.eval(affine(c.a, c.u0, u)));
      const Vec l1 = e1.eigenvalues(), l2 = e2.eigenvalues();
      bool simple = true;
      for (int k = 0; k + 1 < n; ++k)
        if (l1(k + 1) - l1(k) < opts.eigen_gap) simple = false;
      if (!simple) continue;
      aligned = true;
      if (max_abs(l1 - l2) > 1e-5 * (1.0 + l1.cwiseAbs().maxCoeff())) break;
      const int patterns = 1 << std::min(n, 10);
      for (int mask = 0; mask < patterns; ++mask) {
        Vec s = Vec::Ones(n);
        for (int k = 0; k < n; ++k)
          if (mask & (1 << k)) s(k) = -1.0;
        gammas.push_back(e2.eigenvectors() * s.asDiagonal() * e1.eigenvectors().transpose());
      }
    }
    if (!aligned) {
      degenerate = true;
      gammas.push_back(Mat::Identity(n, n));
    }
    for (const auto& g : gammas) {
      IsometryWitness w{c.a, c.u0, orthogonal_polar_factor(g), std::nullopt, 0.0, 0.0};
      // cheap screen before the dense grid
      if (witness_grid_error(pm1, pm2, w, range, 33) > opts.grid_tol) continue;
      w.grid_error = witness_grid_error(pm1, pm2, w, range, opts.grid);
      (void)grid;
      if (w.grid_error > opts.grid_tol) continue;
      const Interval pts = Interval{range.lo, range.hi}.clipped();
      w.residual = pullback_residual(w.map(), pm1, pm2,
                                     sample_points(pts, n, opts.pullback_points, opts.seed));
      out.verdict = Verdict::kIsometric;
      out.witness = w;
      out.reason = featureless ? "verified (featureless invariants, u0 fixed to 0)" : "verified";
      return out;
    }
  }
  if (degenerate) {
    out.verdict = Verdict::kInconclusive;
    out.reason = "eigenvalues degenerate at all probe points";
  } else if (featureless && !(screened_out && invariants_constant(pm1.p) && invariants_constant(pm2.p))) {
    out.verdict = Verdict::kInconclusive;
    out.reason = "featureless invariants leave u0 undetermined";
  } else {
    out.reason = cands.empty() ? "no candidate affine reparametrization" : "no candidate verified";
  }
  return out;
}

namespace {

// k-th derivative of AᵀBA with A, B given by derivative callbacks.
Mat sandwich_derivative(const std::function<Mat(int)>& A, const std::function<Mat(int)>& B, int k) {
  static const int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  Mat out = Mat::Zero(B(0).rows(), B(0).cols());
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k - i; ++j) {
      const int l = k - i - j;
      const double c = binom[k][i] * binom[k - i][j];
      out += c * A(i).transpose() * B(j) * A(l);
    }
  return out;
}

}  // namespace

RosenTransformResult rosen_transform(const MatrixProfile& h, const Mat& E, double u0,
                                     const SolverConfig& config) {
  const int n = h.dim();
  require(E.rows() == n && E.cols() == n && is_symmetric(E), ErrorCode::kNotSymmetric,
          "E must be a symmetric n×n matrix");
  HInverseSolution H = integrate_h_inverse(h, u0, config);
  const Interval range = H.domain();
  const Mat I = Mat::Identity(n, n);

  // first singular point of I + H(u)E on each side of u0
  const auto grid = range.uniform_grid(4001);
  for (double u : grid) {
    Eigen::JacobiSVD<Mat> svd(I + H.H(u) * E);
    const Vec sv = svd.singularValues();
    require(sv(n - 1) > 1e-8 * sv(0), ErrorCode::kSingular,
            "I + H(u)E is singular at u = " + std::to_string(u));
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = (I + H.H(grid[i]) * E).determinant();
    const double b = (I + H.H(grid[i + 1]) * E).determinant();
    require(a * b > 0.0, ErrorCode::kSingular,
            "I + H(u)E is singular at u = " + std::to_string(grid[grid[i] < u0 ? i + 1 : i]));
  }

  auto hbar = MatrixProfile::callable(n, Symmetry::kSymmetric, range, [h, H, E, I](double u, int k) {
    auto M = [&](int j) -> Mat { return j == 0 ? Mat(I + H.H(u) * E) : Mat(H.H(u, j) * E); };
    auto hk = [&](int j) -> Mat { return h.eval(u, j); };
    return Mat(symmetric_part(sandwich_derivative(M, hk, k)));
  });

  const Mat EE = E;
  PointMap map(
      MapKind::kRosenTransform, n,
      [H, EE, I](const SpacetimePoint& pt) {
        const Mat Hu = H.H(pt.u);
        return SpacetimePoint{pt.u, pt.v + 0.5 * pt.x.dot((EE * Hu * EE + EE) * pt.x),
                              (I + Hu * EE) * pt.x};
      },
      [H, EE, I, n](const SpacetimePoint& pt) {
        const Mat Hu = H.H(pt.u), Hd = H.H(pt.u, 1);
        Mat j = Mat::Zero(n + 2, n + 2);
        j(0, 0) = 1.0;
        j(1, 0) = 0.5 * pt.x.dot(EE * Hd * EE * pt.x);
        j(1, 1) = 1.0;
        j.block(1, 2, 1, n) = pt.x.transpose() * (EE * Hu * EE + EE);
        j.block(2, 0, n, 1) = Hd * EE * pt.x;
        j.bottomRightCorner(n, n) = I + Hu * EE;
        return j;
      },
      MapParameters{{{"u0", u0}}, {{"E", E}}});

  RosenTransformResult out{hbar, map, E, H, u0, 0.0};
  out.residual = pullback_residual(out.map, RosenMetric::make(hbar), RosenMetric::make(h.restricted(range)),
                                   sample_points(range, n, 50, 20240611));
  return out;
}

namespace {

// Brinkmann chart → Rosen chart, the inverse of β_L.
PointMap inverse_brinkmannization(const BrinkmannizationResult& b, int n) {
  auto frame = b.frame;
  return PointMap(MapKind::kBrinkmannization, n, [frame](const SpacetimePoint& pt) {
    const Mat L = frame(pt.u, 0), Ld = frame(pt.u, 1);
    const Vec X = L.partialPivLu().solve(pt.x);
    return SpacetimePoint{pt.u, pt.v - 0.5 * X.dot(L.transpose() * Ld * X), X};
  });
}

Interval shrink(const Interval& r, double frac) {
  const double m = frac * r.length();
  return {r.lo + m, r.hi - m};
}

}  // namespace

RosenIsomorphismResult rosen_isomorphic(const RosenMetric& r1, const RosenMetric& r2,
                                        const IsometryOptions& opts, const SolverConfig& config) {
  RosenIsomorphismResult out;
  const int n = r1.n();
  out.E = Mat::Zero(n, n);
  if (n != r2.n()) {
    out.reason = "transverse dimensions differ";
    return out;
  }
  const auto b1 = brinkmannize(r1, std::nullopt, config);
  const auto b2 = brinkmannize(r2, std::nullopt, config);
  const auto iso = brinkmann_isometry(b1.metric, b2.metric, opts);
  out.verdict = iso.verdict;
  out.reason = iso.reason;
  if (!iso.witness) return out;
  const IsometryWitness& w = *iso.witness;
  out.brinkmann = w;
  PointMap map = compose(inverse_brinkmannization(b2, n), compose(w.map(), b1.map));
  out.map = map;

  Interval range = b1.working.intersect(affine_preimage(b2.working, w.a, w.u0));
  range = shrink(range.clipped(), 0.01);
  out.verified_on = range;
  out.residual = pullback_residual(map, r1, r2, sample_points(range, n, opts.pullback_points, opts.seed));
  const double ub = range.contains(b1.base_point) ? b1.base_point : range.midpoint();
  for (int i = 0; i < n; ++i) {
    const Mat j = map.jacobian(SpacetimePoint{ub, 0.0, Vec::Unit(n, i)});
    out.E.col(i) = j.block(1, 2, 1, n).transpose();
  }
  out.E = symmetric_part(out.E);
  if (out.residual > 1e-6) {
    out.verdict = Verdict::kInconclusive;
    out.reason = "Brinkmann witness found but the Rosen pullback check failed";
  }
  return out;
}

PointMap reparametrization_map(const ScalarProfile& U, int n) {
  return PointMap(
      MapKind::kConformalFactorization, n,
      [U](const SpacetimePoint& pt) {
        const auto j = U.jet(pt.u);
        const double s = std::abs(j[1]);
        return SpacetimePoint{j[0], (j[1] > 0 ? 1.0 : -1.0) * pt.v + pt.x.squaredNorm() * j[2] / (4.0 * s),
                              std::sqrt(s) * pt.x};
      },
      [U, n](const SpacetimePoint& pt) {
        const auto j = U.jet(pt.u);
        const double sg = j[1] > 0 ? 1.0 : -1.0, s = std::abs(j[1]), sd = sg * j[2];
        Mat m = Mat::Zero(n + 2, n + 2);
        m(0, 0) = j[1];
        // d/du of Ü/(4|U̇|)
        m(1, 0) = pt.x.squaredNorm() * (j[3] / (4.0 * s) - j[2] * sd / (4.0 * s * s));
        m(1, 1) = sg;
        m.block(1, 2, 1, n) = pt.x.transpose() * (j[2] / (2.0 * s));
        m.block(2, 0, n, 1) = (0.5 * sd / std::sqrt(s)) * pt.x;
        m.bottomRightCorner(n, n) = std::sqrt(s) * Mat::Identity(n, n);
        return m;
      },
      MapParameters{});
}

PointMap wavefront_scaling(double a, const Mat& A) {
  require(a != 0.0, ErrorCode::kInvalidArgument, "a must be nonzero");
  const int n = static_cast<int>(A.rows());
  Mat j = Mat::Zero(n + 2, n + 2);
  j(0, 0) = 1.0;
  j(1, 1) = a * a;
  j.bottomRightCorner(n, n) = a * A;
  return PointMap(
      MapKind::kLinear, n,
      [a, A](const SpacetimePoint& pt) { return SpacetimePoint{pt.u, a * a * pt.v, a * A * pt.x}; },
      [j](const SpacetimePoint&) { return j; }, MapParameters{{{"a", a}}, {{"A", A}}});
}

double verify_conformal_factorization(const BrinkmannMetric& pm1, const BrinkmannMetric& pm2,
                                      const ScalarProfile& U, const PointMap& rho, double a,
                                      const Mat& A, const FactorizationOptions& opts) {
  const int n = pm1.n();
  require(pm2.n() == n && A.rows() == n && A.cols() == n, ErrorCode::kInvalidArgument,
          "dimension mismatch");
  require(max_abs(A.transpose() * A - Mat::Identity(n, n)) <= 1e-10, ErrorCode::kInvalidArgument,
          "A must be orthogonal");
  const Interval range = pm1.p.sampling_range().intersect(U.domain().clipped());
  require(range.length() > 0.0, ErrorCode::kOutOfDomain, "U is not defined on the metric domain");
  double sign = 0.0;
  for (double u : range.uniform_grid(1001)) {
    const double d = U.eval(u, 1);
    require(d != 0.0 && sign * d >= 0.0, ErrorCode::kPrecondition, "U is not strictly monotone");
    sign = d > 0 ? 1.0 : -1.0;
  }
  const PointMap phi = compose(wavefront_scaling(a, A), compose(rho, reparametrization_map(U, n)));
  double worst = 0.0;
  for (const auto& pt : sample_points(range, n, opts.points, opts.seed)) {
    const Mat J = phi.jacobian(pt);
    const Mat pulled = J.transpose() * metric_components(pm2, phi.forward(pt)) * J;
    const Mat G = metric_components(pm1, pt);
    const double c = pulled(0, 1) / G(0, 1);
    worst = std::max(worst, max_abs(pulled - c * G));
  }
  return worst;
}

}  // namespace planewave
