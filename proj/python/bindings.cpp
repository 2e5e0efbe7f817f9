#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "planewave/cli.hpp"
#include "planewave/error.hpp"
#include "planewave/json_io.hpp"
#include "planewave/shift_family.hpp"

namespace py = pybind11;
using namespace planewave;
using json_io::Json;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kSchema, std::string("invalid JSON: ") + e.what());
  }
}

std::optional<Json> parse_optional(const std::optional<std::string>& text) {
  return text ? std::optional<Json>(parse(*text)) : std::nullopt;
}

cli::Settings settings(double tol, int grid, std::uint64_t seed) {
  cli::Settings s;
  s.tol = tol;
  s.grid = grid;
  s.seed = seed;
  return s;
}

// Report with the same envelope as the command line, minus the exit code.
std::string envelope(const std::string& command, const cli::Settings& s, const Json& result) {
  const bool inconclusive = cli::report_verdict(result) == Verdict::kInconclusive;
  const Json report{{"command", command},
                    {"settings", cli::settings_json(s)},
                    {"status", inconclusive ? "inconclusive" : "ok"},
                    {"result", result}};
  return report.dump();
}

#define SETTINGS_ARGS py::arg("tol") = 1e-6, py::arg("grid") = 2001, py::arg("seed") = 20240611

}  // namespace

PYBIND11_MODULE(_planewave, m) {
  m.doc() = "Plane-wave metrics: conversions, symmetries and equivalence decisions";

  static py::exception<Error> error(m, "PlanewaveError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object args = py::make_tuple(std::string(to_string(e.code())), std::string(e.what()));
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  // reports (JSON text in, JSON text out)
  m.def(
      "convert",
      [](const std::string& metric, const std::string& to, std::optional<double> u0, double tol, int grid,
         std::uint64_t seed) {
        const auto s = settings(tol, grid, seed);
        return envelope("convert", s, cli::convert_report(s, parse(metric), to, u0));
      },
      py::arg("metric"), py::arg("to") = "", py::arg("u0") = std::nullopt, SETTINGS_ARGS);
  m.def(
      "killing",
      [](const std::string& metric, double tol, int grid, std::uint64_t seed) {
        const auto s = settings(tol, grid, seed);
        return envelope("killing", s, cli::killing_report(s, parse(metric)));
      },
      py::arg("metric"), SETTINGS_ARGS);
  m.def(
      "conformal",
      [](const std::string& metric, bool microcosm, double tol, int grid, std::uint64_t seed) {
        const auto s = settings(tol, grid, seed);
        return envelope("conformal", s, cli::conformal_report(s, parse(metric), microcosm));
      },
      py::arg("metric"), py::arg("microcosm") = false, SETTINGS_ARGS);
  m.def(
      "equiv",
      [](const std::string& a, const std::string& b, double tol, int grid, std::uint64_t seed) {
        const auto s = settings(tol, grid, seed);
        return envelope("equiv", s, cli::equiv_report(s, parse(a), parse(b)));
      },
      py::arg("first"), py::arg("second"), SETTINGS_ARGS);
  m.def(
      "rosen_equiv",
      [](const std::string& a, const std::string& b, double tol, int grid, std::uint64_t seed) {
        const auto s = settings(tol, grid, seed);
        return envelope("rosen-equiv", s, cli::rosen_equiv_report(s, parse(a), parse(b)));
      },
      py::arg("first"), py::arg("second"), SETTINGS_ARGS);
  m.def(
      "family",
      [](const std::string& alpha, const std::optional<std::string>& beta, std::optional<int> shift, bool crosscheck,
         int k_max, double tol, int grid, std::uint64_t seed) {
        const auto s = settings(tol, grid, seed);
        return envelope("family", s, cli::family_report(s, parse(alpha), parse_optional(beta), shift, crosscheck, k_max));
      },
      py::arg("alpha"), py::arg("beta") = std::nullopt, py::arg("shift") = std::nullopt, py::arg("crosscheck") = false,
      py::arg("k_max") = 30, SETTINGS_ARGS);
  m.def(
      "verify",
      [](const std::string& metric, const std::optional<std::string>& field, const std::optional<std::string>& map,
         const std::optional<std::string>& target, std::optional<double> factor, double tol, int grid,
         std::uint64_t seed) {
        const auto s = settings(tol, grid, seed);
        return envelope("verify", s,
                        cli::verify_report(s, parse(metric), parse_optional(field), parse_optional(map),
                                           parse_optional(target), factor));
      },
      py::arg("metric"), py::arg("field") = std::nullopt, py::arg("map") = std::nullopt,
      py::arg("target") = std::nullopt, py::arg("factor") = std::nullopt, SETTINGS_ARGS);

  // direct numerics
  m.def(
      "profile_eval",
      [](const std::string& profile, double u, int order) {
        return json_io::profile_from_json(parse(profile)).eval(u, order);
      },
      py::arg("profile"), py::arg("u"), py::arg("order") = 0);
  m.def(
      "trace_decompose",
      [](const Mat& mat) {
        const auto d = trace_decompose(mat);
        return py::make_tuple(d.trace_free, d.trace_part);
      },
      py::arg("matrix"));
  m.def(
      "metric_components",
      [](const std::string& metric, double u, double v, const Vec& x) {
        return metric_components(json_io::metric_from_json(parse(metric)), SpacetimePoint{u, v, x});
      },
      py::arg("metric"), py::arg("u"), py::arg("v"), py::arg("x"));
  m.def(
      "is_vacuum",
      [](const std::string& metric, double tol) { return is_vacuum(json_io::brinkmann_from_json(parse(metric)), {tol}); },
      py::arg("metric"), py::arg("tol") = 1e-10);
  m.def(
      "is_flat",
      [](const std::string& metric, double tol) { return is_flat(json_io::brinkmann_from_json(parse(metric)), {tol}); },
      py::arg("metric"), py::arg("tol") = 1e-10);
  m.def(
      "is_conformally_curved",
      [](const std::string& metric, double tol) {
        return is_conformally_curved(json_io::brinkmann_from_json(parse(metric)), {tol});
      },
      py::arg("metric"), py::arg("tol") = 1e-10);

  m.def("bump_exponent", &bump_exponent, py::arg("a"), py::arg("u"), py::arg("order") = 0);
  m.def(
      "bump_exponent_minimum",
      [](double a) {
        const auto r = bump_exponent_minimum(a);
        return py::make_tuple(r.u, r.value);
      },
      py::arg("a"));
  m.def(
      "family_profile",
      [](const std::string& alpha, double u, int order) {
        return family_profile(json_io::sequence_from_json(parse(alpha)), u, order);
      },
      py::arg("alpha"), py::arg("u"), py::arg("order") = 0);
  m.def(
      "bernoulli_shift",
      [](const std::string& alpha, int m) {
        return json_io::to_json(bernoulli_shift(json_io::sequence_from_json(parse(alpha)), m)).dump();
      },
      py::arg("alpha"), py::arg("m"));
  m.def(
      "shift_equivalent",
      [](const std::string& a, const std::string& b) {
        return shift_equivalent(json_io::sequence_from_json(parse(a)), json_io::sequence_from_json(parse(b)));
      },
      py::arg("alpha"), py::arg("beta"));
  m.def(
      "hilbert_distance",
      [](const std::string& a, const std::string& b, int k_max) {
        const auto d =
            hilbert_distance(json_io::sequence_from_json(parse(a)), json_io::sequence_from_json(parse(b)), k_max);
        return py::make_tuple(d.value, d.truncation_bound);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("k_max") = 30);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"planewave"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
