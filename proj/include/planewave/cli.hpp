#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "planewave/equivalence.hpp"
#include "planewave/json_io.hpp"

namespace planewave::cli {

/// Exit codes: 0 success, 2 inconclusive verdict, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

struct Settings {
  double tol = 1e-6;
  int grid = 2001;
  std::uint64_t seed = 20240611;
  std::string out;
  std::string csv;  // optional CSV of sampled profiles
};

using json_io::Json;

Json settings_json(const Settings& s);

// Report bodies shared by the command line and the Python module. Inputs are
// parsed JSON documents in the shipped schemas.
Json convert_report(const Settings& s, const Json& metric, const std::string& to, std::optional<double> u0);
Json killing_report(const Settings& s, const Json& metric);
Json conformal_report(const Settings& s, const Json& metric, bool microcosm);
Json equiv_report(const Settings& s, const Json& first, const Json& second);
Json rosen_equiv_report(const Settings& s, const Json& first, const Json& second);
Json family_report(const Settings& s, const Json& alpha, const std::optional<Json>& beta, std::optional<int> shift,
                   bool crosscheck, int k_max);
Json verify_report(const Settings& s, const Json& metric, const std::optional<Json>& field,
                   const std::optional<Json>& map, const std::optional<Json>& target, std::optional<double> factor);

/// kInconclusive when the report carries an inconclusive isometry verdict.
Verdict report_verdict(const Json& result);

/// Parses the command line and runs one subcommand. The JSON report goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace planewave::cli
