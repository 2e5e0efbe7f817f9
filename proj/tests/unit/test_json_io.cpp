#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "planewave/error.hpp"
#include "planewave/json_io.hpp"

using namespace planewave;
using json_io::Json;

namespace {
const std::string kExamples = std::string(PLANEWAVE_SOURCE_DIR) + "/schemas/examples/";

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kInvalidArgument;
}

double sup_error(const MatrixProfile& a, const MatrixProfile& b) {
  double worst = 0.0;
  for (double u : a.sample_grid(301)) worst = std::max(worst, max_abs(a.eval(u) - b.eval(u)));
  return worst;
}
}  // namespace

TEST_CASE("matrix profile round trips") {
  Mat w(2, 2);
  w << 0, 1, -1, 0;
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  std::vector<MatrixProfile> cases{
      MatrixProfile::constant(d),
      MatrixProfile::constant(w),
      MatrixProfile::zero(3),
      MatrixProfile::rotating_constant(0.5 * w, d),
      MatrixProfile::power_law(1.0, 1.0, d, Interval{0.0, 0.9}),
      MatrixProfile::scalar_times(ScalarProfile(ScalarProfile::Cosine{2.0, 1.5, 0.2}), d),
      MatrixProfile::bernoulli_family(ShiftSequence(-1, {0.125, 0.5, 0.25})),
      MatrixProfile::sum({MatrixProfile::constant(Mat::Identity(2, 2)), MatrixProfile::constant(d)}),
      MatrixProfile::constant(d).restricted({-1.0, 2.0})};
  for (const auto& p : cases) {
    const Json j = json_io::to_json(p);
    const auto back = json_io::profile_from_json(j);
    CHECK(back.symmetry() == p.symmetry());
    CHECK(back.domain() == p.domain());
    CHECK(back.variant().index() == p.variant().index());
    CHECK(sup_error(p, back) == 0.0);
    // serialization is a fixed point
    CHECK(json_io::to_json(back) == j);
  }
}

TEST_CASE("sampled and callable profiles serialize as samples") {
  const auto c = MatrixProfile::callable(1, Symmetry::kSymmetric, Interval{0.0, 1.0},
                                         [](double u, int k) { return Mat(Mat::Constant(1, 1, k == 0 ? u * u : k == 1 ? 2 * u : k == 2 ? 2.0 : 0.0)); });
  const Json j = json_io::to_json(c, 201);
  CHECK(j["kind"] == "sampled");
  const auto back = json_io::profile_from_json(j);
  CHECK(std::abs(back.eval(0.37)(0, 0) - 0.37 * 0.37) < 1e-12);
}

TEST_CASE("metric documents") {
  for (const char* name : {"metric_constant.json", "metric_power_law.json", "metric_rotating.json",
                           "metric_rosen.json", "metric_alekseevsky.json", "metric_flat.json"}) {
    const auto m = json_io::metric_from_json(json_io::read_file(kExamples + name));
    const Json j = json_io::to_json(m);
    const auto again = json_io::metric_from_json(j);
    CHECK(dimension(again) == dimension(m));
    CHECK(domain(again) == domain(m));
    CHECK(json_io::to_json(again) == j);
  }
  const auto r = json_io::rosen_from_json(json_io::read_file(kExamples + "metric_rosen.json"));
  CHECK(r.h.domain() == Interval{-0.5, 0.5});
  CHECK(std::abs(r.h.eval(0.25)(0, 0) - 1.5625) < 1e-14);
  CHECK(code_of([&] { json_io::rosen_from_json(json_io::read_file(kExamples + "metric_constant.json")); }) ==
        ErrorCode::kSchema);
}

TEST_CASE("schema errors carry a path") {
  const Json missing = Json::parse(R"({"form": "brinkmann", "profiles": {}})");
  try {
    json_io::metric_from_json(missing);
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchema);
    CHECK(std::string(e.what()).find("/profiles") != std::string::npos);
  }
  CHECK(code_of([] { json_io::profile_from_json(Json::parse(R"({"kind": "nope"})")); }) == ErrorCode::kSchema);
  CHECK(code_of([] { json_io::profile_from_json(Json::parse(R"({"kind": "constant", "value": [[1, 2], [3]]})")); }) ==
        ErrorCode::kSchema);
  CHECK(code_of([] {
          json_io::metric_from_json(Json::parse(
              R"({"form": "brinkmann", "n": 3, "profiles": {"p": {"kind": "zero", "n": 2}}})"));
        }) == ErrorCode::kSchema);
  CHECK(code_of([] { json_io::sequence_from_json(Json::parse(R"({"window": [0, 1], "values": [0.1, 0.7]})")); }) !=
        ErrorCode::kIo);
  CHECK(code_of([] { json_io::read_file("/nonexistent/file.json"); }) == ErrorCode::kIo);
  // library errors keep their own code
  CHECK(code_of([] {
          json_io::profile_from_json(Json::parse(
              R"({"kind": "power_law", "a": 1, "b": 1, "base": [[1]], "domain": [0, 2]})"));
        }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("maps, fields and witnesses") {
  const auto m = json_io::map_from_json(json_io::read_file(kExamples + "map_affine.json"), 2);
  CHECK(m.kind() == MapKind::kAffineU);
  const Json params = json_io::map_parameters_to_json(m);
  CHECK(params["kind"] == "affine_u");
  CHECK(json_io::map_from_json(params, 2).parameters().scalars == m.parameters().scalars);

  const Json composed = Json::parse(R"({"kind": "composed", "maps": [
      {"kind": "affine_u", "a": 2, "u0": 0, "gamma": [[1, 0], [0, 1]]},
      {"kind": "affine_u", "a": 0.5, "u0": 0, "gamma": [[1, 0], [0, 1]]}]})");
  const auto c = json_io::map_from_json(composed, 2);
  Vec x(2);
  x << 0.3, -0.2;
  const auto p = c.forward({0.7, 1.1, x});
  CHECK(p.u == doctest::Approx(0.7));
  CHECK(p.v == doctest::Approx(1.1));

  const auto metric = json_io::brinkmann_from_json(json_io::read_file(kExamples + "metric_constant.json"));
  CHECK(json_io::field_from_json(json_io::read_file(kExamples + "field_H.json"), metric).b == 1.0);
  const auto X = json_io::field_from_json(json_io::read_file(kExamples + "field_X.json"), metric);
  CHECK(X.q_at(0.0)(0) == doctest::Approx(1.0));
  CHECK(X.qdot_at(0.0)(1) == doctest::Approx(1.0));

  const IsometryWitness w{2.0, 0.5, Mat::Identity(2, 2), std::nullopt, 1e-9, 2e-9};
  const Json wj = json_io::to_json(w);
  CHECK(wj["a"] == 2.0);
  CHECK(wj["u0"] == 0.5);
  CHECK(!wj.contains("composed_with"));
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "planewave_json_io_test.json";
  const Json doc = json_io::to_json(ShiftSequence(-2, {0.5, 0.25}));
  json_io::write_file(path.string(), doc);
  const auto seq = json_io::sequence_from_json(json_io::read_file(path.string()));
  CHECK(seq == ShiftSequence(-2, {0.5, 0.25}));
  std::filesystem::remove(path);
  {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    std::fputs("{not json", f);
    std::fclose(f);
  }
  CHECK(code_of([&] { json_io::read_file(path.string()); }) == ErrorCode::kSchema);
  std::filesystem::remove(path);
}
