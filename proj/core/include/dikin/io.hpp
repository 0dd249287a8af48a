#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "dikin/polytope.hpp"
#include "dikin/walk.hpp"

namespace dikin {

inline constexpr const char* kToolName = "dikin";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Polytope files are {"A": [[...], ...], "b": [...]}.
Polytope load_polytope_json(const std::string& path);
void save_polytope_json(const Polytope& poly, const std::string& path);
Polytope polytope_from_json(const nlohmann::json& j);
nlohmann::json polytope_to_json(const Polytope& poly);

/// One JSON object per recorded sample: {"i": k, "x": [...]}.
void write_trace_jsonl(const ChainTrace& trace, std::ostream& out);
/// Header x0,...,x{n-1}, one row per recorded sample.
void write_trace_csv(const ChainTrace& trace, std::ostream& out);

nlohmann::json trace_stats_json(const ChainTrace& trace);

/// Record of one tool invocation with everything needed to repeat it
/// bit-for-bit: command, polytope source, full option set, output paths.
/// Timing fields are informational and excluded from replay comparison.
struct RunManifest {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string command;
  nlohmann::json options;
  std::vector<std::string> outputs;
  nlohmann::json stats;
  double total_seconds = 0.0;
  double per_step_seconds = 0.0;
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest load_manifest(const std::string& path);
void save_manifest(const RunManifest& m, const std::string& path);

}  // namespace dikin
