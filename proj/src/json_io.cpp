#include "planewave/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "planewave/error.hpp"

namespace planewave::json_io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::kSchema, (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

double number_at(const Json& j, const char* key, const std::string& path) {
  return number(field(j, key, path), path + "/" + key);
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
  return out;
}

Json end_to_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// Run a library constructor, turning its validation errors into schema errors at `path`.
template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchema) throw;
    fail(e.code(), (path.empty() ? std::string("/") : path) + ": " + e.what());
  }
}

MatrixProfile with_domain(MatrixProfile p, const Json& j, const std::string& path) {
  if (!j.contains("domain")) return p;
  const Interval d = interval_from_json(j["domain"], path + "/domain");
  if (d == p.domain()) return p;
  return guarded(path, [&] { return p.restricted(d); });
}

Symmetry symmetry_from(const Json& j, const std::string& path) {
  if (!j.contains("symmetry")) return Symmetry::kSymmetric;
  const std::string s = text(j["symmetry"], path + "/symmetry");
  if (s == "symmetric") return Symmetry::kSymmetric;
  if (s == "skew") return Symmetry::kSkew;
  schema_error(path + "/symmetry", "expected \"symmetric\" or \"skew\"");
}

}  // namespace

Json to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c) + 0.0);  // folds -0 into 0
    out.push_back(row);
  }
  return out;
}

Mat matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of rows");
  const auto rows = j.size();
  Mat m(rows, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = numbers(j[r], path + "/" + std::to_string(r));
    if (row.size() != rows) schema_error(path, "expected a square matrix");
    for (std::size_t c = 0; c < rows; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return m;
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i) + 0.0);
  return out;
}

Vec vector_from_json(const Json& j, const std::string& path) {
  const auto xs = numbers(j, path);
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Json to_json(const Interval& r) { return Json::array({end_to_json(r.lo), end_to_json(r.hi)}); }

Interval interval_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected [lo, hi]");
  const double lo = j[0].is_null() ? -INFINITY : number(j[0], path + "/0");
  const double hi = j[1].is_null() ? INFINITY : number(j[1], path + "/1");
  if (!(lo < hi)) schema_error(path, "expected lo < hi");
  return {lo, hi};
}

Json to_json(const ScalarProfile& s, int samples) {
  Json out = std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScalarProfile::Constant>)
          return {{"kind", "constant"}, {"value", v.value}};
        else if constexpr (std::is_same_v<T, ScalarProfile::Polynomial>)
          return {{"kind", "polynomial"}, {"coeffs", v.coeffs}};
        else if constexpr (std::is_same_v<T, ScalarProfile::Exponential>)
          return {{"kind", "exponential"}, {"amplitude", v.amplitude}, {"rate", v.rate}};
        else if constexpr (std::is_same_v<T, ScalarProfile::Cosine>)
          return {{"kind", "cosine"}, {"amplitude", v.amplitude}, {"frequency", v.frequency}, {"phase", v.phase}};
        else if constexpr (std::is_same_v<T, ScalarProfile::HyperbolicCosine>)
          return {{"kind", "cosh"}, {"amplitude", v.amplitude}, {"rate", v.rate}, {"phase", v.phase}};
        else if constexpr (std::is_same_v<T, ScalarProfile::PowerLaw>)
          return {{"kind", "power_law"}, {"scale", v.scale}, {"a", v.a}, {"b", v.b}, {"exponent", v.exponent}};
        else if constexpr (std::is_same_v<T, ScalarProfile::Sampled>)
          return {{"kind", "sampled"}, {"grid", v.spline.knots()}, {"values", v.spline.values()}};
        else {
          const auto grid = s.domain().clipped().uniform_grid(samples);
          std::vector<double> values;
          for (double u : grid) values.push_back(s.eval(u));
          return {{"kind", "sampled"}, {"grid", grid}, {"values", values}};
        }
      },
      s.variant());
  out["domain"] = to_json(s.domain());
  return out;
}

ScalarProfile scalar_from_json(const Json& j, const std::string& path) {
  const std::string kind = text(field(j, "kind", path), path + "/kind");
  const Interval domain = j.contains("domain") ? interval_from_json(j["domain"], path + "/domain")
                                               : Interval::real_line();
  return guarded(path, [&]() -> ScalarProfile {
    if (kind == "constant") return ScalarProfile(ScalarProfile::Constant{number_at(j, "value", path)}, domain);
    if (kind == "polynomial")
      return ScalarProfile(ScalarProfile::Polynomial{numbers(field(j, "coeffs", path), path + "/coeffs")}, domain);
    if (kind == "exponential")
      return ScalarProfile(ScalarProfile::Exponential{number_at(j, "amplitude", path), number_at(j, "rate", path)},
                           domain);
    if (kind == "cosine")
      return ScalarProfile(ScalarProfile::Cosine{number_at(j, "amplitude", path), number_at(j, "frequency", path),
                                                 number_at(j, "phase", path)},
                           domain);
    if (kind == "cosh")
      return ScalarProfile(ScalarProfile::HyperbolicCosine{number_at(j, "amplitude", path),
                                                           number_at(j, "rate", path), number_at(j, "phase", path)},
                           domain);
    if (kind == "power_law")
      return ScalarProfile(ScalarProfile::PowerLaw{number_at(j, "scale", path), number_at(j, "a", path),
                                                   number_at(j, "b", path), number_at(j, "exponent", path)},
                           domain);
    if (kind == "sampled")
      return ScalarProfile::sampled(numbers(field(j, "grid", path), path + "/grid"),
                                    numbers(field(j, "values", path), path + "/values"));
    schema_error(path + "/kind", "unknown scalar profile kind \"" + kind + "\"");
  });
}

Json to_json(const MatrixProfile& p, int samples) {
  using namespace profile_kind;
  Json out = std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>)
          return {{"kind", "constant"}, {"value", to_json(v.value)}};
        else if constexpr (std::is_same_v<T, RotatingConstant>)
          return {{"kind", "rotating_constant"}, {"omega", to_json(v.omega)}, {"base", to_json(v.base)}};
        else if constexpr (std::is_same_v<T, PowerLaw>)
          return {{"kind", "power_law"}, {"a", v.a}, {"b", v.b}, {"base", to_json(v.base)}};
        else if constexpr (std::is_same_v<T, ScalarTimesFixed>)
          return {{"kind", "scalar_times"}, {"scalar", to_json(v.scalar, samples)}, {"fixed", to_json(v.fixed)}};
        else if constexpr (std::is_same_v<T, BernoulliFamily>)
          return {{"kind", "bernoulli_family"}, {"alpha", to_json(v.alpha)}};
        else if constexpr (std::is_same_v<T, Sampled>) {
          Json values = Json::array();
          for (const auto& m : v.values) values.push_back(to_json(m));
          return {{"kind", "sampled"}, {"grid", v.grid}, {"values", values}};
        } else if constexpr (std::is_same_v<T, Sum>) {
          Json terms = Json::array();
          for (const auto& t : v.terms) terms.push_back(to_json(t, samples));
          return {{"kind", "sum"}, {"terms", terms}};
        } else {
          const auto grid = p.sampling_range().uniform_grid(samples);
          Json values = Json::array();
          for (double u : grid) values.push_back(to_json(p.eval(u)));
          return {{"kind", "sampled"}, {"grid", grid}, {"values", values}};
        }
      },
      p.variant());
  out["symmetry"] = p.symmetry() == Symmetry::kSymmetric ? "symmetric" : "skew";
  out["domain"] = to_json(p.domain());
  return out;
}

MatrixProfile profile_from_json(const Json& j, const std::string& path) {
  const std::string kind = text(field(j, "kind", path), path + "/kind");
  const Symmetry sym = symmetry_from(j, path);
  auto mat = [&](const char* key) { return matrix_from_json(field(j, key, path), path + "/" + key); };
  MatrixProfile p = guarded(path, [&]() -> MatrixProfile {
    if (kind == "constant")
      return j.contains("symmetry") ? MatrixProfile::constant(mat("value"), sym)
                                    : MatrixProfile::constant(mat("value"));
    if (kind == "zero") return MatrixProfile::zero(integer(field(j, "n", path), path + "/n"), sym);
    if (kind == "rotating_constant") return MatrixProfile::rotating_constant(mat("omega"), mat("base"));
    if (kind == "power_law") {
      const double a = number_at(j, "a", path), b = number_at(j, "b", path);
      Interval d = j.contains("domain") ? interval_from_json(j["domain"], path + "/domain")
                                        : (b > 0 ? Interval{-INFINITY, a / b} : Interval{a / b, INFINITY});
      return MatrixProfile::power_law(a, b, mat("base"), d);
    }
    if (kind == "scalar_times")
      return MatrixProfile::scalar_times(scalar_from_json(field(j, "scalar", path), path + "/scalar"), mat("fixed"));
    if (kind == "bernoulli_family")
      return MatrixProfile::bernoulli_family(sequence_from_json(field(j, "alpha", path), path + "/alpha"));
    if (kind == "sampled") {
      const auto grid = numbers(field(j, "grid", path), path + "/grid");
      const Json& vals = field(j, "values", path);
      if (!vals.is_array()) schema_error(path + "/values", "expected an array of matrices");
      std::vector<Mat> values;
      for (std::size_t i = 0; i < vals.size(); ++i)
        values.push_back(matrix_from_json(vals[i], path + "/values/" + std::to_string(i)));
      return MatrixProfile::sampled(grid, values, sym);
    }
    if (kind == "sum") {
      const Json& ts = field(j, "terms", path);
      if (!ts.is_array() || ts.empty()) schema_error(path + "/terms", "expected a non-empty array");
      std::vector<MatrixProfile> terms;
      for (std::size_t i = 0; i < ts.size(); ++i)
        terms.push_back(profile_from_json(ts[i], path + "/terms/" + std::to_string(i)));
      return MatrixProfile::sum(terms);
    }
    schema_error(path + "/kind", "unknown profile kind \"" + kind + "\"");
  });
  if (kind == "power_law") return p;
  return with_domain(p, j, path);
}

Json to_json(const ShiftSequence& s) {
  return {{"window", {s.lo(), s.hi()}}, {"values", s.values()}};
}

ShiftSequence sequence_from_json(const Json& j, const std::string& path) {
  const Json& w = field(j, "window", path);
  if (!w.is_array() || w.size() != 2) schema_error(path + "/window", "expected [lo, hi]");
  const int lo = integer(w[0], path + "/window/0"), hi = integer(w[1], path + "/window/1");
  auto values = numbers(field(j, "values", path), path + "/values");
  if (static_cast<int>(values.size()) != hi - lo + 1)
    schema_error(path + "/values", "window length does not match the number of values");
  return guarded(path, [&] { return ShiftSequence(lo, std::move(values)); });
}

Json to_json(const PlaneWaveMetric& m, int samples) {
  return std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json out{{"n", v.n()}, {"domain", to_json(v.domain())}};
        if constexpr (std::is_same_v<T, BrinkmannMetric>) {
          out["form"] = "brinkmann";
          out["profiles"] = {{"p", to_json(v.p, samples)}};
        } else if constexpr (std::is_same_v<T, RosenMetric>) {
          out["form"] = "rosen";
          out["profiles"] = {{"h", to_json(v.h, samples)}};
          out["singular_set"] = v.singular_set;
        } else {
          out["form"] = "alekseevsky";
          out["profiles"] = {{"p", to_json(v.p, samples)}, {"omega", to_json(v.omega, samples)}};
        }
        return out;
      },
      m);
}

PlaneWaveMetric metric_from_json(const Json& j, const std::string& path) {
  const std::string form = text(field(j, "form", path), path + "/form");
  const Json& profiles = field(j, "profiles", path);
  const std::string pp = path + "/profiles";
  auto profile = [&](const char* key) {
    MatrixProfile p = profile_from_json(field(profiles, key, pp), pp + "/" + key);
    if (j.contains("domain") && !field(profiles, key, pp).contains("domain")) {
      const Interval d = interval_from_json(j["domain"], path + "/domain");
      if (!(d == p.domain())) p = guarded(path, [&] { return p.restricted(d); });
    }
    return p;
  };
  PlaneWaveMetric out = guarded(path, [&]() -> PlaneWaveMetric {
    if (form == "brinkmann") return BrinkmannMetric::make(profile("p"));
    if (form == "rosen") {
      std::vector<double> singular;
      if (j.contains("singular_set")) singular = numbers(j["singular_set"], path + "/singular_set");
      return RosenMetric::make(profile("h"), singular);
    }
    if (form == "alekseevsky") return AlekseevskyMetric::make(profile("p"), profile("omega"));
    schema_error(path + "/form", "expected \"brinkmann\", \"rosen\" or \"alekseevsky\"");
  });
  if (j.contains("n") && integer(j["n"], path + "/n") != dimension(out))
    schema_error(path + "/n", "n does not match the profile dimension");
  return out;
}

BrinkmannMetric brinkmann_from_json(const Json& j, const std::string& path) {
  auto m = metric_from_json(j, path);
  if (const auto* b = std::get_if<BrinkmannMetric>(&m)) return *b;
  schema_error(path + "/form", "expected a Brinkmann metric");
}

RosenMetric rosen_from_json(const Json& j, const std::string& path) {
  auto m = metric_from_json(j, path);
  if (const auto* r = std::get_if<RosenMetric>(&m)) return *r;
  schema_error(path + "/form", "expected a Rosen metric");
}

Json to_json(const IsometryWitness& w) {
  Json out{{"a", w.a}, {"u0", w.u0}, {"gamma", to_json(w.gamma)}, {"grid_error", w.grid_error},
           {"residual", w.residual}};
  if (w.composed_with) out["composed_with"] = *w.composed_with;
  return out;
}

PointMap map_from_json(const Json& j, int n, const std::string& path) {
  const std::string kind = text(field(j, "kind", path), path + "/kind");
  auto mat = [&](const char* key) { return matrix_from_json(field(j, key, path), path + "/" + key); };
  return guarded(path, [&]() -> PointMap {
    if (kind == "identity") return PointMap::identity(n);
    if (kind == "affine_u")
      return PointMap::affine_u(number_at(j, "a", path), number_at(j, "u0", path), mat("gamma"));
    if (kind == "linear") return PointMap::linear(number_at(j, "c", path), number_at(j, "d", path), mat("A"));
    if (kind == "dilation_scale") return PointMap::dilation_scale(number_at(j, "t", path));
    if (kind == "rotation_gauge") return PointMap::rotation_gauge(mat("omega"));
    if (kind == "wavefront_scaling") return wavefront_scaling(number_at(j, "a", path), mat("A"));
    if (kind == "composed") {
      const Json& ms = field(j, "maps", path);
      if (!ms.is_array() || ms.empty()) schema_error(path + "/maps", "expected a non-empty array");
      PointMap out = map_from_json(ms.back(), n, path + "/maps/" + std::to_string(ms.size() - 1));
      for (std::size_t i = ms.size() - 1; i-- > 0;)
        out = compose(map_from_json(ms[i], n, path + "/maps/" + std::to_string(i)), out);
      return out;
    }
    schema_error(path + "/kind", "unknown map kind \"" + kind + "\"");
  });
}

Json map_parameters_to_json(const PointMap& m) {
  Json out{{"kind", std::string(to_string(m.kind()))}};
  for (const auto& [k, v] : m.parameters().scalars) out[k] = v;
  for (const auto& [k, v] : m.parameters().matrices) out[k] = to_json(v);
  return out;
}

StructuredVectorField field_from_json(const Json& j, const BrinkmannMetric& metric,
                                      const std::string& path) {
  const std::string kind = text(field(j, "kind", path), path + "/kind");
  const int n = metric.n();
  auto mat = [&](const char* key) { return matrix_from_json(field(j, key, path), path + "/" + key); };
  return guarded(path, [&]() -> StructuredVectorField {
    if (kind == "H") return field_H(metric.p);
    if (kind == "D") return field_D(metric.p);
    if (kind == "X") {
      const double u0 = j.contains("u0") ? number(j["u0"], path + "/u0") : 0.0;
      const Vec q0 = vector_from_json(field(j, "q0", path), path + "/q0");
      const Vec qd = vector_from_json(field(j, "qdot0", path), path + "/qdot0");
      if (q0.size() != n || qd.size() != n) schema_error(path, "q0 and qdot0 need n entries");
      Interval range = metric.p.sampling_range();
      if (!range.contains(u0)) range = integration_range(metric.p.domain(), u0);
      return field_X(metric.p, solve_jacobi_vector(metric.p, u0, q0, qd, {}, range), "X_q");
    }
    if (kind == "L") return field_L(metric.p, mat("Y"));
    if (kind == "T") {
      const Mat C = j.contains("C") ? mat("C") : Mat(Mat::Zero(n, n));
      return field_T(metric.p, number_at(j, "a", path), number_at(j, "b", path), C);
    }
    if (kind == "V") {
      const Mat W = j.contains("W") ? mat("W") : Mat(Mat::Zero(n, n));
      return field_V(metric.p, scaling_function(metric.p), W, "V_(w,W)");
    }
    schema_error(path + "/kind", "unknown field kind \"" + kind + "\"");
  });
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kSchema, path + ": invalid JSON: " + e.what());
  }
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace planewave::json_io
