#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dikin/generators.hpp"
#include "dikin/io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

using dikin::Matrix;
using dikin::Polytope;
using dikin::Vector;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("dikin_io_test_" + name);
}

struct FileGuard {
  fs::path path;
  ~FileGuard() {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("format_double round-trips bit-exactly") {
  const double values[] = {0.0,
                           1.0,
                           -1.0,
                           0.1,
                           1.0 / 3.0,
                           1e-300,
                           1e300,
                           123456789.123456,
                           -2.2250738585072014e-308,
                           5e-324,
                           0x1.fffffffffffffp+1023};
  for (double v : values) {
    const std::string s = dikin::format_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(dikin::format_double(0.5) == "0.5");
  CHECK(dikin::format_double(2.0) == "2");
}

TEST_CASE("polytope JSON round-trip is exact") {
  const Polytope poly = dikin::make_random_polytope(3, 5, 59);
  const auto path = temp_file("poly.json");
  FileGuard guard{path};
  dikin::save_polytope_json(poly, path.string());
  const Polytope back = dikin::load_polytope_json(path.string());
  REQUIRE(back.A().rows() == poly.A().rows());
  REQUIRE(back.A().cols() == poly.A().cols());
  CHECK((back.A() - poly.A()).norm() == 0.0);
  CHECK((back.b() - poly.b()).norm() == 0.0);
}

TEST_CASE("polytope JSON rejects malformed input") {
  CHECK_THROWS_AS(dikin::load_polytope_json("/nonexistent/path.json"),
                  dikin::Error);
  const auto path = temp_file("bad.json");
  FileGuard guard{path};
  {
    std::ofstream out(path);
    out << "{\"A\": [[1, 0]], \"b\": \"oops\"}";
  }
  CHECK_THROWS_AS(dikin::load_polytope_json(path.string()), dikin::Error);
  {
    std::ofstream out(path);
    out << "not json at all";
  }
  CHECK_THROWS_AS(dikin::load_polytope_json(path.string()), dikin::Error);
}

TEST_CASE("trace writers are deterministic and parseable") {
  dikin::ChainTrace trace;
  Vector a(2), b(2);
  a << 0.25, -1.5;
  b << 1.0 / 3.0, 0.7071067811865476;
  trace.samples = {a, b};
  trace.per_step_filter_values = {1.0, 0.5};
  trace.counters.proposals = 2;
  trace.counters.accepted = 1;

  std::ostringstream jsonl1, jsonl2;
  dikin::write_trace_jsonl(trace, jsonl1);
  dikin::write_trace_jsonl(trace, jsonl2);
  CHECK(jsonl1.str() == jsonl2.str());

  std::istringstream lines(jsonl1.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("i").get<int>() == count);
    const auto x = j.at("x").get<std::vector<double>>();
    REQUIRE(x.size() == 2);
    CHECK(x[0] == trace.samples[count][0]);
    CHECK(x[1] == trace.samples[count][1]);
    ++count;
  }
  CHECK(count == 2);

  std::ostringstream csv;
  dikin::write_trace_csv(trace, csv);
  std::istringstream csv_lines(csv.str());
  std::getline(csv_lines, line);
  CHECK(line == "x0,x1");
  std::getline(csv_lines, line);
  CHECK(line == "0.25,-1.5");
  std::getline(csv_lines, line);
  const auto comma = line.find(',');
  CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == b[0]);
  CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == b[1]);
}

TEST_CASE("trace stats summarize counters") {
  dikin::ChainTrace trace;
  Vector a(1);
  a << 0.5;
  trace.samples = {a};
  trace.per_step_filter_values = {1.0, 0.25};
  trace.counters.proposals = 2;
  trace.counters.accepted = 1;
  trace.counters.rejected_by_filter = 1;
  trace.acceptance_rate = 0.5;
  const auto j = dikin::trace_stats_json(trace);
  CHECK(j.at("samples").get<int>() == 1);
  CHECK(j.at("proposals").get<long long>() == 2);
  CHECK(j.at("accepted").get<long long>() == 1);
  CHECK(j.at("acceptance_rate").get<double>() == 0.5);
  CHECK(j.at("mean_filter_value").get<double>() == doctest::Approx(0.625));
}

TEST_CASE("manifest round-trips through disk") {
  dikin::RunManifest m;
  m.command = "sample";
  m.options = {{"steps", 100}, {"seed", 7}, {"barrier", "log"}};
  m.outputs = {"trace.jsonl"};
  m.stats = {{"acceptance_rate", 0.97}};
  m.total_seconds = 1.25;
  m.per_step_seconds = 0.0125;

  const auto path = temp_file("manifest.json");
  FileGuard guard{path};
  dikin::save_manifest(m, path.string());
  const auto back = dikin::load_manifest(path.string());
  CHECK(back.tool == m.tool);
  CHECK(back.version == m.version);
  CHECK(back.command == m.command);
  CHECK(back.options == m.options);
  CHECK(back.outputs == m.outputs);
  CHECK(back.stats == m.stats);
  CHECK(back.total_seconds == m.total_seconds);
  CHECK(back.per_step_seconds == m.per_step_seconds);
}

TEST_CASE("manifest loading rejects missing or malformed files") {
  CHECK_THROWS_AS(dikin::load_manifest("/nonexistent/manifest.json"),
                  dikin::Error);
  const auto path = temp_file("manifest_bad.json");
  FileGuard guard{path};
  {
    std::ofstream out(path);
    out << "{\"tool\": \"dikin\"}";
  }
  CHECK_THROWS_AS(dikin::load_manifest(path.string()), dikin::Error);
}

TEST_SUITE_END();
