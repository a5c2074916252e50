#pragma once

// Experiment configuration: a JSON object with a `schema_version` field.
//
//   {
//     "schema_version": 1,
//     "alpha": 0.7071067811865476,
//     "operator": {"kind": "dirichlet_laplacian_1d", "length": 0.5, "modes": 3},
//     "a": [1, 0.5, -0.3], "b": [], "f": [1, -0.5, 0.25],
//     "mu": {"T": 1, "pieces": [{"t0": 0, "t1": 1, "coeffs": [1, -2]}]},
//     "omega": [0.1, 0.25],
//     "times": {"lo": 8, "hi": 2048, "count": 80},
//     "noise": 0, "seed": 0, "terms": 4,
//     ...subcommand sections
//   }
//
// The operator kind may also be "diagonal" with an "eigenvalues" list.
// Field errors are reported as ValidationError("field '<path>': ...").

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdw/error.hpp"
#include "fdw/forward.hpp"
#include "fdw/source_profile.hpp"
#include "fdw/spectrum.hpp"

namespace fdw::cli {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

Json load_config(const std::string& path);

/// Runs `parse` and prefixes any ValidationError with the field path.
template <class F>
auto field(const std::string& path, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("field '", 0) == 0) throw;
    throw ValidationError("field '" + path + "': " + what);
  } catch (const Json::exception& e) {
    throw ValidationError("field '" + path + "': " + e.what());
  }
}

double get_double(const Json& j, const std::string& key);
double get_double(const Json& j, const std::string& key, double fallback);
int get_int(const Json& j, const std::string& key, int fallback);
std::vector<double> get_doubles(const Json& j, const std::string& key);

SpectralOperator parse_operator(const Json& j);
SourceProfile parse_profile(const Json& j);
ProblemSpec parse_spec(const Json& j);
Interval parse_omega(const Json& j, const SpectralOperator& op);
std::vector<double> parse_times(const Json& j, double T);

}  // namespace fdw::cli
