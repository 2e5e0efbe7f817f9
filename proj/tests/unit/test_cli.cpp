#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "planewave/cli.hpp"
#include "planewave/json_io.hpp"

using namespace planewave;
using json_io::Json;

namespace {
const std::string kExamples = std::string(PLANEWAVE_SOURCE_DIR) + "/schemas/examples/";

struct Run {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "planewave");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("equiv on the scaled constant pair") {
  const auto r = run({"equiv", kExamples + "metric_scaled_a.json", kExamples + "metric_scaled_b.json"});
  CHECK(r.code == 0);
  const Json j = r.report();
  CHECK(j["status"] == "ok");
  CHECK(j["result"]["verdict"] == "isometric");
  CHECK(j["result"]["witness"]["a"].get<double>() == doctest::Approx(2.0));
  CHECK(j["result"]["witness"]["u0"].get<double>() == doctest::Approx(0.0));
  CHECK(j["settings"]["tol"] == 1e-6);
  CHECK(j["settings"]["grid"] == 2001);
}

TEST_CASE("family crosscheck summary") {
  const auto r = run({"family", "--alpha", kExamples + "sequence_alpha.json", "--beta", kExamples + "sequence_beta.json",
                      "--crosscheck"});
  CHECK(r.code == 0);
  const Json j = r.report();
  CHECK(j["result"]["summary"] == "equivalent, m=3");
  CHECK(j["result"]["crosscheck"]["agree"] == true);
}

TEST_CASE("verify a Killing field on flat space") {
  const auto r = run({"verify", "--metric", kExamples + "metric_flat.json", "--field", kExamples + "field_H.json"});
  CHECK(r.code == 0);
  CHECK(r.report()["result"]["killing_residual"] == 0.0);
  CHECK(r.report()["result"]["pass"] == true);
}

TEST_CASE("reports are deterministic and embed settings") {
  const std::vector<std::string> args{"--seed", "17", "--grid", "1001", "conformal", kExamples + "metric_rotating.json"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.report()["settings"]["seed"] == 17);
  CHECK(a.report()["settings"]["grid"] == 1001);
  CHECK(a.report()["result"]["dim"] == 7);
}

TEST_CASE("errors produce machine codes") {
  const auto schema = run({"killing", kExamples + "sequence_alpha.json"});
  CHECK(schema.code == cli::kExitError);
  CHECK(schema.report()["status"] == "error");
  CHECK(schema.report()["error"]["code"] == "schema");

  const auto usage = run({"equiv", kExamples + "metric_constant.json"});
  CHECK(usage.code == cli::kExitError);
  CHECK(usage.report()["error"]["code"] == "usage");

  const auto none = run({});
  CHECK(none.code == cli::kExitError);

  const auto help = run({"--help"});
  CHECK(help.code == cli::kExitOk);
}

TEST_CASE("out and csv files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = (dir / "planewave_cli_report.json").string();
  const auto csv = (dir / "planewave_cli_profile.csv").string();
  const auto r = run({"convert", kExamples + "metric_rosen.json", "--out", out, "--csv", csv, "--grid", "11"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const Json j = json_io::read_file(out);
  CHECK(j["command"] == "convert");
  CHECK(j["result"]["residual"].get<double>() <= 1e-7);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "u,h_11,h_12,h_22,tr_h2");
  int rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  CHECK(rows == 11);
  std::filesystem::remove(out);
  std::filesystem::remove(csv);
}

TEST_CASE("killing, convert and verify-map reports") {
  const auto k = run({"killing", kExamples + "metric_power_law.json"});
  CHECK(k.code == 0);
  CHECK(k.report()["result"]["extra_isometry"]["status"] == "found");
  CHECK(k.report()["result"]["extra_isometry"]["killing_residual"].get<double>() <= 1e-7);

  const auto c = run({"convert", kExamples + "metric_constant.json"});
  CHECK(c.code == 0);
  CHECK(c.report()["result"]["round_trip"]["sup_error"].get<double>() <= 1e-6);

  const auto m = run({"verify", "--metric", kExamples + "metric_constant.json", "--map", kExamples + "map_affine.json",
                      "--target", kExamples + "metric_constant_scaled.json"});
  CHECK(m.code == 0);
  CHECK(m.report()["result"]["pullback_residual"].get<double>() <= 1e-12);

  const auto wrong = run({"verify", "--metric", kExamples + "metric_constant.json", "--map",
                          kExamples + "map_affine.json"});
  CHECK(wrong.report()["result"]["pass"] == false);
}
