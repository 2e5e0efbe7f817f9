#include "planewave/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "planewave/equivalence.hpp"
#include "planewave/error.hpp"
#include "planewave/forms.hpp"
#include "planewave/json_io.hpp"
#include "planewave/shift_family.hpp"
#include "planewave/symmetries.hpp"

namespace planewave::cli {

namespace {

using json_io::Json;
using json_io::to_json;

IsometryOptions isometry_options(const Settings& s) {
  IsometryOptions opts;
  opts.grid_tol = s.tol;
  opts.grid = s.grid;
  opts.seed = s.seed;
  return opts;
}

// One CSV row per grid point: u followed by the listed columns.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<double>& grid,
               const std::function<std::vector<double>(double)>& row) {
  if (path.empty()) return;
  std::ofstream f(path);
  require(f.good(), ErrorCode::kIo, "cannot write " + path);
  f << "u";
  for (const auto& h : header) f << "," << h;
  f << "\n" << std::setprecision(17);
  for (double u : grid) {
    f << u;
    for (double v : row(u)) f << "," << v;
    f << "\n";
  }
}

std::vector<std::string> entry_names(const std::string& name, int n) {
  std::vector<std::string> out;
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) out.push_back(name + "_" + std::to_string(r + 1) + std::to_string(c + 1));
  return out;
}

std::vector<double> entries(const Mat& m) {
  std::vector<double> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = r; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

// Profile entries and tr p² on the sampling grid.
void profile_csv(const Settings& s, const MatrixProfile& p, const std::string& name) {
  auto header = entry_names(name, p.dim());
  header.push_back("tr_" + name + "2");
  write_csv(s.csv, header, p.sampling_range().uniform_grid(s.grid), [&](double u) {
    const Mat m = p.eval(u);
    auto row = entries(m);
    row.push_back((m * m).trace());
    return row;
  });
}

const MatrixProfile& main_profile(const PlaneWaveMetric& m) {
  if (const auto* b = std::get_if<BrinkmannMetric>(&m)) return b->p;
  if (const auto* r = std::get_if<RosenMetric>(&m)) return r->h;
  return std::get<AlekseevskyMetric>(m).p;
}

double sup_distance(const MatrixProfile& a, const MatrixProfile& b, const Interval& r, int grid) {
  double worst = 0.0;
  for (double u : r.uniform_grid(grid)) worst = std::max(worst, max_abs(a.eval(u) - b.eval(u)));
  return worst;
}

}  // namespace

Json settings_json(const Settings& s) {
  return {{"tol", s.tol}, {"grid", s.grid}, {"seed", s.seed}};
}

Json convert_report(const Settings& s, const Json& doc, const std::string& to, std::optional<double> u0) {
  const auto metric = json_io::metric_from_json(doc);
  profile_csv(s, main_profile(metric), std::holds_alternative<RosenMetric>(metric) ? "h" : "p");
  if (const auto* b = std::get_if<BrinkmannMetric>(&metric)) {
    if (to == "alekseevsky") {
      const auto a = brinkmann_to_alekseevsky(*b);
      return {{"metric", to_json(PlaneWaveMetric(a.metric), s.grid)}, {"residual", a.residual},
              {"map", json_io::map_parameters_to_json(a.map)}};
    }
    require(to.empty() || to == "rosen", ErrorCode::kInvalidArgument, "cannot convert Brinkmann to " + to);
    const double base = u0.value_or(b->p.domain().contains(0.0) ? 0.0 : b->p.domain().midpoint());
    const auto r = rosenize(*b, base);
    const auto back = brinkmannize(r.metric, base);
    return {{"metric", to_json(PlaneWaveMetric(r.metric), s.grid)},
            {"residual", r.residual},
            {"validity", to_json(r.validity)},
            {"round_trip",
             {{"residual", back.residual},
              {"working", to_json(back.working)},
              {"sup_error", sup_distance(back.metric.p, b->p, back.working, s.grid)}}}};
  }
  if (const auto* r = std::get_if<RosenMetric>(&metric)) {
    require(to.empty() || to == "brinkmann", ErrorCode::kInvalidArgument, "cannot convert Rosen to " + to);
    const auto b = brinkmannize(*r, u0);
    return {{"metric", to_json(PlaneWaveMetric(b.metric), s.grid)},
            {"residual", b.residual},
            {"base_point", b.base_point},
            {"working", to_json(b.working)}};
  }
  const auto& a = std::get<AlekseevskyMetric>(metric);
  require(to.empty() || to == "brinkmann", ErrorCode::kInvalidArgument,
          "cannot convert Alekseevsky to " + to);
  const auto b = alekseevsky_to_brinkmann(a);
  const auto back = brinkmann_to_alekseevsky(b.metric);
  return {{"metric", to_json(PlaneWaveMetric(b.metric), s.grid)},
          {"residual", b.residual},
          {"round_trip",
           {{"omega_error", max_abs(back.metric.omega.eval(0.0) - a.omega.eval(0.0))},
            {"p_error", max_abs(back.metric.p.eval(0.0) - a.p.eval(0.0))}}}};
}

Json killing_report(const Settings& s, const Json& doc) {
  const auto metric = json_io::brinkmann_from_json(doc);
  profile_csv(s, metric.p, "p");
  const auto rep = extra_isometry(metric);
  Json result{{"extra_isometry",
               {{"status", std::string(to_string(rep.status))},
                {"a", rep.a},
                {"b", rep.b},
                {"C", to_json(rep.C)},
                {"dimension", rep.dimension},
                {"nullity", rep.nullity},
                {"smallest_ratio", rep.smallest_ratio}}}};
  if (rep.field) result["extra_isometry"]["killing_residual"] = killing_residual(metric, *rep.field, s.seed);
  Json autos = Json::array();
  for (const auto& m : commutant_automorphisms(metric)) autos.push_back(to_json(m));
  result["commutant_automorphisms"] = autos;
  Json cent = Json::array();
  for (const auto& m : centralizer_basis(metric)) cent.push_back(to_json(m));
  result["centralizer"] = cent;
  result["lambda"] = cent.size();
  return result;
}

Json conformal_report(const Settings& s, const Json& doc, bool microcosm) {
  const auto metric = json_io::brinkmann_from_json(doc);
  profile_csv(s, metric.p, "p");
  const auto rep = conformal_algebra(metric);
  Json labels = Json::array();
  double worst_killing = 0.0;
  for (const auto& f : rep.basis) {
    labels.push_back(f.label);
    worst_killing = std::max(worst_killing, killing_residual(metric, f, s.seed));
  }
  Json constants = Json::array();
  for (int i = 0; i < rep.dim; ++i)
    for (int j = i + 1; j < rep.dim; ++j)
      for (int k = 0; k < rep.dim; ++k)
        if (std::abs(rep.c(i, j, k)) > 1e-10) constants.push_back({i, j, k, rep.c(i, j, k)});
  Json result{{"dim", rep.dim},
              {"n", rep.n},
              {"lambda", rep.lambda},
              {"has_extra_symmetry", rep.has_extra_symmetry},
              {"basis", labels},
              {"base_point", rep.base_point},
              {"structure_constants", constants},
              {"derived_algebra_dim", rep.derived_algebra.cols()},
              {"center_indices", rep.center_indices},
              {"residuals",
               {{"decomposition", rep.decomposition_residual},
                {"jacobi", rep.jacobi_residual},
                {"antisymmetry", rep.antisymmetry_residual},
                {"killing", worst_killing}}}};
  if (std::isfinite(rep.w_equation_residual)) result["residuals"]["w_equation"] = rep.w_equation_residual;
  if (std::isfinite(rep.w_system_residual)) result["residuals"]["w_system"] = rep.w_system_residual;
  if (microcosm) {
    const auto nf = microcosm_normal_form(metric);
    result["microcosm"] = {{"omega", to_json(nf.omega)}, {"p", to_json(nf.p)}, {"u_ref", nf.u_ref},
                           {"chart", to_json(nf.chart)}, {"residual", nf.residual}};
  }
  return result;
}

Json equiv_report(const Settings& s, const Json& a, const Json& b) {
  const auto m1 = json_io::brinkmann_from_json(a);
  const auto m2 = json_io::brinkmann_from_json(b);
  const auto r = brinkmann_isometry(m1, m2, isometry_options(s));
  Json result{{"verdict", std::string(to_string(r.verdict))}, {"reason", r.reason}, {"candidates", r.candidates}};
  if (r.witness) result["witness"] = to_json(*r.witness);
  return result;
}

Json rosen_equiv_report(const Settings& s, const Json& a, const Json& b) {
  const auto r1 = json_io::rosen_from_json(a);
  const auto r2 = json_io::rosen_from_json(b);
  const auto r = rosen_isomorphic(r1, r2, isometry_options(s));
  Json result{{"verdict", std::string(to_string(r.verdict))}, {"reason", r.reason}};
  if (r.brinkmann) {
    result["brinkmann_witness"] = to_json(*r.brinkmann);
    result["E"] = to_json(r.E);
    result["residual"] = r.residual;
    result["verified_on"] = to_json(r.verified_on);
  }
  return result;
}

Json family_report(const Settings& s, const Json& alpha_doc, const std::optional<Json>& beta_doc,
                   std::optional<int> shift, bool crosscheck, int k_max) {
  const auto alpha = json_io::sequence_from_json(alpha_doc);
  Json result{{"alpha", to_json(alpha)}};
  std::optional<ShiftSequence> beta;
  if (beta_doc) beta = json_io::sequence_from_json(*beta_doc);
  require(!(beta_doc && shift), ErrorCode::kInvalidArgument, "give either beta or a shift, not both");
  if (shift) {
    beta = bernoulli_shift(alpha, *shift);
    result["shifted"] = to_json(*beta);
  }
  const auto metric = family_metric(alpha);
  result["vacuum"] = is_vacuum(metric);
  Interval range = metric.p.sampling_range();
  if (beta) {
    const Interval rb = family_metric(*beta).p.sampling_range();
    range = {std::min(range.lo, rb.lo), std::max(range.hi, rb.hi)};
  }
  write_csv(s.csv, beta ? std::vector<std::string>{"p_alpha", "p_beta"} : std::vector<std::string>{"p_alpha"},
            range.uniform_grid(s.grid), [&](double u) {
              std::vector<double> row{family_profile(alpha, u)};
              if (beta) row.push_back(family_profile(*beta, u));
              return row;
            });
  if (!beta) return result;
  result["beta"] = to_json(*beta);
  const auto m = shift_equivalent(alpha, *beta);
  result["shift_equivalent"] = m ? Json(*m) : Json(nullptr);
  const auto d = hilbert_distance(alpha, *beta, k_max);
  result["hilbert_distance"] = {{"value", d.value}, {"truncation_bound", d.truncation_bound}, {"k_max", k_max}};
  if (crosscheck) {
    const auto rep = family_isometry_crosscheck(alpha, *beta, isometry_options(s));
    Json c{{"agree", rep.agree},
           {"isometry", std::string(to_string(rep.isometry.verdict))},
           {"reason", rep.isometry.reason}};
    if (rep.isometry.witness) {
      c["witness"] = to_json(*rep.isometry.witness);
      c["epsilon"] = rep.epsilon;
      c["witness_matches_shift"] = rep.witness_matches_shift;
    }
    result["crosscheck"] = c;
    result["summary"] = rep.shift ? "equivalent, m=" + std::to_string(*rep.shift) : std::string("not equivalent");
  } else {
    result["summary"] = m ? "equivalent, m=" + std::to_string(*m) : std::string("not equivalent");
  }
  return result;
}

Json verify_report(const Settings& s, const Json& metric_doc, const std::optional<Json>& field_doc,
                   const std::optional<Json>& map_doc, const std::optional<Json>& target_doc,
                   std::optional<double> factor) {
  const auto metric = json_io::metric_from_json(metric_doc);
  const int n = dimension(metric);
  Json result;
  if (field_doc) {
    const auto* b = std::get_if<BrinkmannMetric>(&metric);
    require(b != nullptr, ErrorCode::kSchema, "field verification needs a Brinkmann metric");
    const auto f = json_io::field_from_json(*field_doc, *b);
    result["field"] = f.label;
    result["killing_residual"] = killing_residual(*b, f, s.seed);
    result["points"] = 200;
  }
  if (map_doc) {
    const auto map = json_io::map_from_json(*map_doc, n);
    const auto target = target_doc ? json_io::metric_from_json(*target_doc) : metric;
    ConformalFactor c;
    if (factor) c = [f = *factor](const SpacetimePoint&) { return f; };
    const auto pts = sample_points(main_profile(metric).sampling_range(), n, 50, s.seed);
    result["map"] = json_io::map_parameters_to_json(map);
    result["pullback_residual"] = pullback_residual(map, metric, target, pts, c);
    result["points"] = 50;
  }
  require(!result.is_null(), ErrorCode::kInvalidArgument, "verify needs --field or --map");
  result["pass"] = (result.contains("killing_residual") ? result["killing_residual"].get<double>() <= s.tol : true) &&
                   (result.contains("pullback_residual") ? result["pullback_residual"].get<double>() <= s.tol : true);
  return result;
}

Verdict report_verdict(const Json& result) {
  const Json* v = nullptr;
  if (result.contains("verdict")) v = &result["verdict"];
  else if (result.contains("crosscheck")) v = &result["crosscheck"]["isometry"];
  return v && *v == "inconclusive" ? Verdict::kInconclusive : Verdict::kIsometric;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plane-wave metric toolkit", "planewave"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--tol", s.tol, "Verification tolerance")->capture_default_str();
  app.add_option("--grid", s.grid, "Grid density for sampling and CSV output")->capture_default_str();
  app.add_option("--seed", s.seed, "Seed for random sample points")->capture_default_str();
  app.add_option("--out", s.out, "Write the JSON report to this file");
  app.add_option("--csv", s.csv, "Write sampled profiles to this CSV file");

  std::string input, second, to, field, map, target, beta;
  std::optional<double> u0, factor;
  std::optional<int> shift;
  bool microcosm = false, crosscheck = false;
  int k_max = 30;

  auto* c_convert = app.add_subcommand("convert", "Convert between Brinkmann, Rosen and Alekseevsky forms");
  c_convert->add_option("metric", input)->required()->check(CLI::ExistingFile);
  c_convert->add_option("--to", to, "Target form")->check(CLI::IsMember({"brinkmann", "rosen", "alekseevsky"}));
  c_convert->add_option("--u0", u0, "Base point");

  auto* c_killing = app.add_subcommand("killing", "Extra isometry and commutant automorphisms");
  c_killing->add_option("metric", input)->required()->check(CLI::ExistingFile);

  auto* c_conformal = app.add_subcommand("conformal", "Conformal Killing algebra");
  c_conformal->add_option("metric", input)->required()->check(CLI::ExistingFile);
  c_conformal->add_flag("--microcosm", microcosm, "Also compute the microcosm normal form");

  auto* c_equiv = app.add_subcommand("equiv", "Isometry of two Brinkmann metrics");
  c_equiv->add_option("first", input)->required()->check(CLI::ExistingFile);
  c_equiv->add_option("second", second)->required()->check(CLI::ExistingFile);

  auto* c_rosen = app.add_subcommand("rosen-equiv", "Isomorphism of two Rosen metrics");
  c_rosen->add_option("first", input)->required()->check(CLI::ExistingFile);
  c_rosen->add_option("second", second)->required()->check(CLI::ExistingFile);

  auto* c_family = app.add_subcommand("family", "Shift-sequence family of vacuum plane waves");
  c_family->add_option("--alpha", input)->required()->check(CLI::ExistingFile);
  auto* beta_opt = c_family->add_option("--beta", beta)->check(CLI::ExistingFile);
  c_family->add_option("--shift", shift, "Compare alpha with its shift by m")->excludes(beta_opt);
  c_family->add_flag("--crosscheck", crosscheck, "Cross-check against the isometry decision");
  c_family->add_option("--kmax", k_max, "Truncation of the Hilbert-cube distance")->capture_default_str();

  auto* c_verify = app.add_subcommand("verify", "Killing or pullback residual of user-supplied data");
  c_verify->add_option("--metric", input)->required()->check(CLI::ExistingFile);
  c_verify->add_option("--field", field)->check(CLI::ExistingFile);
  c_verify->add_option("--map", map)->check(CLI::ExistingFile);
  c_verify->add_option("--target", target)->check(CLI::ExistingFile);
  c_verify->add_option("--factor", factor, "Constant conformal factor for --map");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kExitOk;
    const Json report{{"command", nullptr},
                      {"status", "error"},
                      {"settings", settings_json(s)},
                      {"error", {{"code", "usage"}, {"message", e.what()}}}};
    out << report.dump(2) << "\n";
    return kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Json report{{"command", command}, {"settings", settings_json(s)}};
  int exit_code = kExitOk;
  auto load = [](const std::string& path) { return path.empty() ? std::optional<Json>() : json_io::read_file(path); };
  try {
    Json result;
    if (command == "convert") result = convert_report(s, json_io::read_file(input), to, u0);
    else if (command == "killing") result = killing_report(s, json_io::read_file(input));
    else if (command == "conformal") result = conformal_report(s, json_io::read_file(input), microcosm);
    else if (command == "equiv") result = equiv_report(s, json_io::read_file(input), json_io::read_file(second));
    else if (command == "rosen-equiv")
      result = rosen_equiv_report(s, json_io::read_file(input), json_io::read_file(second));
    else if (command == "family")
      result = family_report(s, json_io::read_file(input), load(beta), shift, crosscheck, k_max);
    else result = verify_report(s, json_io::read_file(input), load(field), load(map), load(target), factor);
    report["result"] = result;
    if (report_verdict(result) == Verdict::kInconclusive) {
      report["status"] = "inconclusive";
      exit_code = kExitInconclusive;
    } else {
      report["status"] = "ok";
    }
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    exit_code = kExitError;
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["error"] = {{"code", "internal"}, {"message", e.what()}};
    err << "error: " << e.what() << "\n";
    exit_code = kExitError;
  }
  if (s.out.empty()) {
    out << report.dump(2) << "\n";
  } else {
    try {
      json_io::write_file(s.out, report);
    } catch (const Error& e) {
      err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
      return kExitError;
    }
  }
  return exit_code;
}

}  // namespace planewave::cli
