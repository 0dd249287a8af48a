#include "dikin/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

namespace dikin {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Polytope polytope_from_json(const nlohmann::json& j) {
  const auto& ja = j.at("A");
  const auto& jb = j.at("b");
  if (!ja.is_array() || ja.empty() || !jb.is_array()) {
    throw Error("polytope JSON needs non-empty arrays A and b");
  }
  const Index m = static_cast<Index>(ja.size());
  const Index n = static_cast<Index>(ja.front().size());
  Matrix A(m, n);
  Vector b(m);
  for (Index i = 0; i < m; ++i) {
    const auto& row = ja.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != n) {
      throw Error("polytope JSON rows of A have inconsistent lengths");
    }
    for (Index k = 0; k < n; ++k) {
      A(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
  }
  for (Index i = 0; i < m; ++i) {
    b[i] = jb.at(static_cast<std::size_t>(i)).get<double>();
  }
  return Polytope(std::move(A), std::move(b));
}

nlohmann::json polytope_to_json(const Polytope& poly) {
  nlohmann::json ja = nlohmann::json::array();
  for (Index i = 0; i < poly.num_constraints(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index k = 0; k < poly.dimension(); ++k) row.push_back(poly.A()(i, k));
    ja.push_back(std::move(row));
  }
  nlohmann::json jb = nlohmann::json::array();
  for (Index i = 0; i < poly.num_constraints(); ++i) jb.push_back(poly.b()[i]);
  return {{"A", std::move(ja)}, {"b", std::move(jb)}};
}

Polytope load_polytope_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open polytope file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("cannot parse polytope file " + path + ": " + e.what());
  }
  return polytope_from_json(j);
}

void save_polytope_json(const Polytope& poly, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write polytope file: " + path);
  out << polytope_to_json(poly).dump(2) << "\n";
}

void write_trace_jsonl(const ChainTrace& trace, std::ostream& out) {
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    out << "{\"i\":" << k << ",\"x\":[";
    const Vector& x = trace.samples[k];
    for (Index j = 0; j < x.size(); ++j) {
      if (j > 0) out << ',';
      out << format_double(x[j]);
    }
    out << "]}\n";
  }
}

void write_trace_csv(const ChainTrace& trace, std::ostream& out) {
  if (trace.samples.empty()) return;
  const Index n = trace.samples.front().size();
  for (Index j = 0; j < n; ++j) {
    if (j > 0) out << ',';
    out << 'x' << j;
  }
  out << '\n';
  for (const Vector& x : trace.samples) {
    for (Index j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << format_double(x[j]);
    }
    out << '\n';
  }
}

nlohmann::json trace_stats_json(const ChainTrace& trace) {
  double mean_filter = 0.0;
  for (double v : trace.per_step_filter_values) mean_filter += v;
  if (!trace.per_step_filter_values.empty()) {
    mean_filter /= static_cast<double>(trace.per_step_filter_values.size());
  }
  return {{"acceptance_rate", trace.acceptance_rate},
          {"accepted", trace.counters.accepted},
          {"proposals", trace.counters.proposals},
          {"rejected_by_filter", trace.counters.rejected_by_filter},
          {"rejected_outside", trace.counters.rejected_outside},
          {"steps", trace.steps_executed},
          {"samples", trace.samples.size()},
          {"mean_filter_value", mean_filter},
          {"seed", trace.seed},
          {"stream", trace.stream}};
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  return {{"tool", m.tool},
          {"version", m.version},
          {"command", m.command},
          {"options", m.options},
          {"outputs", m.outputs},
          {"stats", m.stats},
          {"total_seconds", m.total_seconds},
          {"per_step_seconds", m.per_step_seconds}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.tool = j.at("tool").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.command = j.at("command").get<std::string>();
  m.options = j.at("options");
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  if (j.contains("stats")) m.stats = j.at("stats");
  if (j.contains("total_seconds")) m.total_seconds = j.at("total_seconds");
  if (j.contains("per_step_seconds")) {
    m.per_step_seconds = j.at("per_step_seconds");
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("cannot parse manifest " + path + ": " + e.what());
  }
  try {
    return manifest_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest " + path + " is missing fields: " + e.what());
  }
}

void save_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest: " + path);
  out << manifest_to_json(m).dump(2) << "\n";
}

}  // namespace dikin
