#include "planewave/profile.hpp"

#include <algorithm>
#include <cmath>

#include "planewave/error.hpp"

namespace planewave {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Symmetry classify(const Mat& m) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorCode::kInvalidArgument,
          "profile matrices must be square and non-empty");
  if (is_symmetric(m)) return Symmetry::kSymmetric;
  if (is_skew(m)) return Symmetry::kSkew;
  fail(ErrorCode::kNotSymmetric, "profile matrix is neither symmetric nor skew");
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

Interval bernoulli_range(const ShiftSequence& alpha) {
  return {static_cast<double>(alpha.lo() - 2), static_cast<double>(alpha.hi() + 3)};
}

}  // namespace

MatrixProfile::MatrixProfile(Variant v, int n, Symmetry symmetry, Interval domain,
                             std::vector<double> knots)
    : data_(std::make_shared<const Variant>(std::move(v))),
      n_(n),
      symmetry_(symmetry),
      domain_(domain),
      extra_knots_(std::move(knots)) {}

MatrixProfile MatrixProfile::constant(const Mat& value, std::optional<Symmetry> symmetry) {
  const Symmetry s = symmetry ? *symmetry : classify(value);
  if (symmetry) {
    const bool ok = s == Symmetry::kSymmetric ? is_symmetric(value) : is_skew(value);
    require(ok, ErrorCode::kNotSymmetric, "constant matrix violates the declared symmetry");
  }
  const Mat clean = s == Symmetry::kSymmetric ? symmetric_part(value) : skew_part(value);
  return MatrixProfile(profile_kind::Constant{clean}, static_cast<int>(value.rows()), s,
                       Interval::real_line());
}

MatrixProfile MatrixProfile::zero(int n, Symmetry symmetry) {
  require(n > 0, ErrorCode::kInvalidArgument, "dimension must be positive");
  return MatrixProfile(profile_kind::Constant{Mat::Zero(n, n)}, n, symmetry, Interval::real_line());
}

MatrixProfile MatrixProfile::rotating_constant(const Mat& omega, const Mat& base) {
  require(omega.rows() == base.rows() && omega.cols() == base.cols(), ErrorCode::kInvalidArgument,
          "rotation and base must have equal dimensions");
  require(is_skew(omega), ErrorCode::kNotSymmetric, "rotation generator must be skew");
  require(is_symmetric(base), ErrorCode::kNotSymmetric, "base matrix must be symmetric");
  return MatrixProfile(profile_kind::RotatingConstant{skew_part(omega), symmetric_part(base)},
                       static_cast<int>(base.rows()), Symmetry::kSymmetric, Interval::real_line());
}

MatrixProfile MatrixProfile::power_law(double a, double b, const Mat& base, Interval domain) {
  require(is_symmetric(base), ErrorCode::kNotSymmetric, "base matrix must be symmetric");
  require(a != 0.0 || b != 0.0, ErrorCode::kInvalidArgument, "power law needs (a, b) != 0");
  if (b != 0.0) {
    const double pole = a / b;
    require(!(pole >= domain.lo && pole <= domain.hi), ErrorCode::kInvalidArgument,
            "power-law domain must exclude u = a/b");
  }
  return MatrixProfile(profile_kind::PowerLaw{a, b, symmetric_part(base)},
                       static_cast<int>(base.rows()), Symmetry::kSymmetric, domain);
}

MatrixProfile MatrixProfile::scalar_times(const ScalarProfile& scalar, const Mat& fixed) {
  const Symmetry s = classify(fixed);
  return MatrixProfile(profile_kind::ScalarTimesFixed{scalar, fixed},
                       static_cast<int>(fixed.rows()), s, scalar.domain());
}

MatrixProfile MatrixProfile::bernoulli_family(const ShiftSequence& alpha) {
  return MatrixProfile(profile_kind::BernoulliFamily{alpha}, 2, Symmetry::kSymmetric,
                       Interval::real_line());
}

MatrixProfile MatrixProfile::sampled(std::vector<double> grid, std::vector<Mat> values,
                                     Symmetry symmetry) {
  require(grid.size() == values.size() && grid.size() >= 2, ErrorCode::kInvalidArgument,
          "sampled profile needs at least two samples with matching grid");
  const int n = static_cast<int>(values.front().rows());
  for (auto& m : values) {
    require(m.rows() == n && m.cols() == n, ErrorCode::kInvalidArgument,
            "sampled matrices must share one square shape");
    const bool ok = symmetry == Symmetry::kSymmetric ? is_symmetric(m, 1e-8) : is_skew(m, 1e-8);
    require(ok, ErrorCode::kNotSymmetric, "sampled matrix violates the declared symmetry");
    m = symmetry == Symmetry::kSymmetric ? symmetric_part(m) : skew_part(m);
  }
  std::vector<CubicSpline> entries;
  entries.reserve(static_cast<std::size_t>(n * n));
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      std::vector<double> ys(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) ys[i] = values[i](r, c);
      entries.emplace_back(grid, std::move(ys));
    }
  const Interval domain{grid.front(), grid.back()};
  return MatrixProfile(profile_kind::Sampled{std::move(grid), std::move(values), std::move(entries)},
                       n, symmetry, domain);
}

MatrixProfile MatrixProfile::sum(std::vector<MatrixProfile> terms) {
  require(!terms.empty(), ErrorCode::kInvalidArgument, "sum of no profiles");
  const int n = terms.front().dim();
  const Symmetry s = terms.front().symmetry();
  Interval domain = terms.front().domain();
  for (const auto& t : terms) {
    require(t.dim() == n && t.symmetry() == s, ErrorCode::kInvalidArgument,
            "summands must share dimension and symmetry type");
    domain = domain.intersect(t.domain());
  }
  return MatrixProfile(profile_kind::Sum{std::move(terms)}, n, s, domain);
}

MatrixProfile MatrixProfile::callable(int n, Symmetry symmetry, Interval domain,
                                      std::function<Mat(double, int)> fn,
                                      std::vector<double> knots) {
  require(n > 0, ErrorCode::kInvalidArgument, "dimension must be positive");
  return MatrixProfile(profile_kind::Callable{std::move(fn)}, n, symmetry, domain, std::move(knots));
}

Mat MatrixProfile::eval(double u, int order) const {
  require(order >= 0 && order <= 3, ErrorCode::kInvalidArgument, "derivative order must be 0..3");
  require(domain_.contains(u), ErrorCode::kOutOfDomain,
          "profile evaluated outside its domain " + domain_.describe());
  using namespace profile_kind;
  return std::visit(
      Overloaded{
          [&](const Constant& c) -> Mat {
            return order == 0 ? c.value : Mat::Zero(n_, n_);
          },
          [&](const RotatingConstant& r) -> Mat {
            // d/du (e^{−uω}Xe^{uω}) = e^{−uω}[X, ω]e^{uω}
            Mat x = r.base;
            for (int i = 0; i < order; ++i) x = commutator(x, r.omega);
            const Mat rot = expm(-u * r.omega);
            return rot * x * rot.transpose();
          },
          [&](const PowerLaw& p) -> Mat {
            const double s = p.a - p.b * u;
            return factorial(order + 1) * std::pow(p.b, order) * std::pow(s, -2 - order) * p.base;
          },
          [&](const ScalarTimesFixed& s) -> Mat { return s.scalar.eval(u, order) * s.fixed; },
          [&](const BernoulliFamily& b) -> Mat {
            const double v = family_profile(b.alpha, u, order);
            Mat m = Mat::Zero(2, 2);
            m(0, 0) = v;
            m(1, 1) = -v;
            return m;
          },
          [&](const Sampled& s) -> Mat {
            Mat m(n_, n_);
            for (int c = 0; c < n_; ++c)
              for (int r = 0; r < n_; ++r)
                m(r, c) = s.entries[static_cast<std::size_t>(c * n_ + r)].eval(u, order);
            return symmetry_ == Symmetry::kSymmetric ? symmetric_part(m) : skew_part(m);
          },
          [&](const Sum& s) -> Mat {
            Mat m = Mat::Zero(n_, n_);
            for (const auto& t : s.terms) m += t.eval(u, order);
            return m;
          },
          [&](const Callable& c) -> Mat { return c.fn(u, order); },
      },
      *data_);
}

Interval MatrixProfile::sampling_range() const {
  using namespace profile_kind;
  if (const auto* b = std::get_if<BernoulliFamily>(data_.get()))
    return domain_.intersect(bernoulli_range(b->alpha));
  if (const auto* s = std::get_if<Sum>(data_.get())) {
    if (!domain_.is_bounded()) {
      double lo = domain_.lo, hi = domain_.hi;
      bool hinted = false;
      for (const auto& t : s->terms)
        if (std::holds_alternative<BernoulliFamily>(t.variant())) {
          const Interval r = t.sampling_range();
          lo = hinted ? std::min(lo, r.lo) : r.lo;
          hi = hinted ? std::max(hi, r.hi) : r.hi;
          hinted = true;
        }
      if (hinted) return domain_.intersect({lo, hi});
    }
  }
  return domain_.clipped();
}

std::vector<double> MatrixProfile::knots() const {
  using namespace profile_kind;
  const Interval range = sampling_range();
  std::vector<double> out;
  auto keep = [&](double u) {
    if (u >= range.lo && u <= range.hi) out.push_back(u);
  };
  std::visit(Overloaded{
                 [&](const Sampled& s) {
                   for (double u : s.grid) keep(u);
                 },
                 [&](const BernoulliFamily&) {
                   for (double u = std::ceil(range.lo); u <= range.hi; u += 1.0) keep(u);
                 },
                 [&](const Sum& s) {
                   for (const auto& t : s.terms)
                     for (double u : t.knots()) keep(u);
                 },
                 [&](const auto&) {},
             },
             *data_);
  for (double u : extra_knots_) keep(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> MatrixProfile::sample_grid(int count) const {
  std::vector<double> grid = sampling_range().uniform_grid(count);
  const auto k = knots();
  // Dense knot sets (spline grids) are thinned to at most `count` extra points.
  const std::size_t stride = std::max<std::size_t>(1, k.size() / static_cast<std::size_t>(std::max(count, 1)));
  for (std::size_t i = 0; i < k.size(); i += stride) grid.push_back(k[i]);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

MatrixProfile MatrixProfile::restricted(const Interval& sub) const {
  require(sub.lo >= domain_.lo && sub.hi <= domain_.hi, ErrorCode::kOutOfDomain,
          "restriction must lie inside the profile domain");
  MatrixProfile copy = *this;
  copy.domain_ = sub;
  return copy;
}

TraceDecomposition trace_decompose(const Mat& m, double tol) {
  require(is_symmetric(m, tol), ErrorCode::kNotSymmetric, "trace decomposition needs a symmetric matrix");
  const auto n = m.rows();
  const double p = m.trace() / static_cast<double>(n);
  return {m - p * Mat::Identity(n, n), p};
}

double seminorm(const MatrixProfile& profile, int k, double grid_step) {
  require(k >= 1, ErrorCode::kInvalidArgument, "seminorm index must be positive");
  const Interval window{-static_cast<double>(k), static_cast<double>(k)};
  require(profile.domain().contains(window.lo) && profile.domain().contains(window.hi),
          ErrorCode::kOutOfDomain, "seminorm window [-k, k] exceeds the profile domain");
  const int count = static_cast<int>(std::ceil(2.0 * k / grid_step)) + 1;
  const double fd_step = 1e-2;
  double sup = 0.0;
  for (int i = 0; i < count; ++i) {
    const double u = std::min(window.hi, window.lo + i * grid_step);
    double total = 0.0;
    for (int j = 0; j <= std::min(k, 3); ++j) total += profile.eval(u, j).norm();
    for (int j = 4; j <= k; ++j) {
      // Central difference of order m = j − 3 applied to the third derivative.
      const int m = j - 3;
      double centre = u;
      const double reach = 0.5 * m * fd_step;
      centre = std::clamp(centre, profile.domain().lo + reach, profile.domain().hi - reach);
      Mat acc = Mat::Zero(profile.dim(), profile.dim());
      double binom = 1.0;
      for (int s = 0; s <= m; ++s) {
        const double sign = (s % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * profile.eval(centre + (0.5 * m - s) * fd_step, 3);
        binom = binom * (m - s) / (s + 1);
      }
      total += (acc / std::pow(fd_step, m)).norm();
    }
    sup = std::max(sup, total);
  }
  return sup;
}

}  // namespace planewave
