#include "planewave/scalar_profile.hpp"

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

double falling(double m, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (m - i);
  return r;
}

}  // namespace

ScalarProfile::ScalarProfile(Variant v, Interval domain)
    : data_(std::make_shared<const Variant>(std::move(v))), domain_(domain) {
  if (const auto* s = std::get_if<Sampled>(data_.get())) {
    domain_ = domain_.intersect({s->spline.knots().front(), s->spline.knots().back()});
  }
  if (const auto* p = std::get_if<PowerLaw>(data_.get())) {
    if (p->b != 0.0) {
      const double pole = p->a / p->b;
      require(!(pole >= domain_.lo && pole <= domain_.hi), ErrorCode::kInvalidArgument,
              "power-law scalar domain contains its pole");
    }
  }
}

ScalarProfile ScalarProfile::sampled(std::vector<double> grid, std::vector<double> values) {
  CubicSpline spline(std::move(grid), std::move(values));
  const Interval d{spline.knots().front(), spline.knots().back()};
  return ScalarProfile(Sampled{std::move(spline)}, d);
}

ScalarProfile ScalarProfile::callable(std::function<Jet(double)> jet, Interval domain) {
  return ScalarProfile(Callable{std::move(jet)}, domain);
}

double ScalarProfile::eval(double u, int order) const {
  require(order >= 0 && order <= 3, ErrorCode::kInvalidArgument, "derivative order must be 0..3");
  require(domain_.contains(u), ErrorCode::kOutOfDomain,
          "scalar profile evaluated outside " + domain_.describe());
  return std::visit(
      Overloaded{
          [&](const Constant& c) { return order == 0 ? c.value : 0.0; },
          [&](const Polynomial& p) {
            double acc = 0.0;
            for (std::size_t i = p.coeffs.size(); i-- > static_cast<std::size_t>(order);) {
              acc = acc * u + p.coeffs[i] * falling(static_cast<double>(i), order);
            }
            return acc;
          },
          [&](const Exponential& e) {
            return e.amplitude * std::pow(e.rate, order) * std::exp(e.rate * u);
          },
          [&](const Cosine& c) {
            const double arg = c.frequency * u + c.phase;
            const double k = std::pow(c.frequency, order);
            switch (order) {
              case 0: return c.amplitude * std::cos(arg);
              case 1: return -c.amplitude * k * std::sin(arg);
              case 2: return -c.amplitude * k * std::cos(arg);
              default: return c.amplitude * k * std::sin(arg);
            }
          },
          [&](const HyperbolicCosine& c) {
            const double arg = c.rate * u + c.phase;
            const double k = std::pow(c.rate, order);
            return c.amplitude * k * (order % 2 == 0 ? std::cosh(arg) : std::sinh(arg));
          },
          [&](const PowerLaw& p) {
            const double base = p.a - p.b * u;
            return p.scale * falling(p.exponent, order) * std::pow(-p.b, order) *
                   std::pow(base, p.exponent - order);
          },
          [&](const Sampled& s) { return s.spline.eval(u, order); },
          [&](const Callable& c) { return c.jet(u)[static_cast<std::size_t>(order)]; },
      },
      *data_);
}

Jet ScalarProfile::jet(double u) const {
  if (const auto* c = std::get_if<Callable>(data_.get())) {
    require(domain_.contains(u), ErrorCode::kOutOfDomain,
            "scalar profile evaluated outside " + domain_.describe());
    return c->jet(u);
  }
  return {eval(u, 0), eval(u, 1), eval(u, 2), eval(u, 3)};
}

}  // namespace planewave
