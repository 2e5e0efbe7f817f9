#pragma once

#include <json.hpp>
#include <string>

#include "planewave/bernoulli.hpp"
#include "planewave/equivalence.hpp"
#include "planewave/metric.hpp"
#include "planewave/point_map.hpp"
#include "planewave/profile.hpp"
#include "planewave/symmetries.hpp"

namespace planewave::json_io {

using Json = nlohmann::json;

/// Errors from the readers carry ErrorCode::kSchema with a JSON-pointer-like path.
Json to_json(const Mat& m);
Mat matrix_from_json(const Json& j, const std::string& path = "");
Json to_json(const Vec& v);
Vec vector_from_json(const Json& j, const std::string& path = "");

/// [lo, hi] with null for an infinite end.
Json to_json(const Interval& r);
Interval interval_from_json(const Json& j, const std::string& path = "");

/// Callable profiles are written as Sampled on their sampling range.
Json to_json(const ScalarProfile& s, int samples = 2001);
ScalarProfile scalar_from_json(const Json& j, const std::string& path = "");

Json to_json(const MatrixProfile& p, int samples = 2001);
MatrixProfile profile_from_json(const Json& j, const std::string& path = "");

Json to_json(const ShiftSequence& s);
ShiftSequence sequence_from_json(const Json& j, const std::string& path = "");

/// {"form", "n", "domain", "profiles": {...}, "singular_set"?}
Json to_json(const PlaneWaveMetric& m, int samples = 2001);
PlaneWaveMetric metric_from_json(const Json& j, const std::string& path = "");
BrinkmannMetric brinkmann_from_json(const Json& j, const std::string& path = "");
RosenMetric rosen_from_json(const Json& j, const std::string& path = "");

Json to_json(const IsometryWitness& w);

/// Point maps named by a closed-form kind; "composed" lists maps outermost first.
PointMap map_from_json(const Json& j, int n, const std::string& path = "");
Json map_parameters_to_json(const PointMap& m);

/// Structured fields: H, D, X (u0, q0, qdot0), L (Y), T (a, b, C), V (W with w = Q^{−1/4}).
StructuredVectorField field_from_json(const Json& j, const BrinkmannMetric& metric,
                                      const std::string& path = "");

Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);

}  // namespace planewave::json_io
