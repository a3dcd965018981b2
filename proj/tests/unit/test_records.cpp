#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <thread>

#include "amshe/errors.hpp"
#include "amshe/experiments.hpp"
#include "amshe/records.hpp"
#include "doctest.h"

using namespace amshe;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("amshe_records_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentReport small_report() {
  ExperimentReport r;
  r.experiment = "qv";
  r.config_digest = "0123456789abcdef";
  r.criteria.push_back({"ratio", 3.99, "within 5% of 4", true});
  r.tables["t"] = CsvTable{{"a", "b"}, {{0.1, 1.0 / 3.0}}};
  return r;
}

}  // namespace

TEST_CASE("a report without paths writes a valid summary and an empty path file") {
  const auto dir = fresh_dir("empty");
  write_report(small_report(), dir);
  const auto summary = read_json(dir / "summary.json");
  CHECK(summary["kind"] == "summary");
  CHECK(summary["config_digest"] == "0123456789abcdef");
  CHECK(summary["path_count"] == 0);
  CHECK(summary["all_pass"] == true);
  CHECK(read_ndjson(dir / "paths.ndjson").empty());
  CHECK(slurp(dir / "t.csv") == "a,b\n0.1,0.3333333333333333\n");
  CHECK(std::filesystem::exists(dir / "runtime.json"));
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
  }
}

TEST_CASE("NDJSON round trip is bit-exact") {
  const auto dir = fresh_dir("roundtrip");
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<Json> records;
  std::vector<double> values;
  for (std::size_t i = 0; i < 2000; ++i) {
    AdjointSummary s;
    s.M_end = std::ldexp(u(gen), -static_cast<int>(i % 60));
    s.N_end = u(gen) / 3.0;
    s.qv_M_inc = std::nextafter(1.0, 2.0);
    values.push_back(s.M_end);
    values.push_back(s.N_end);
    records.push_back(adjoint_path_record(s, "feedfacecafebeef", "delta", i));
  }
  write_ndjson(dir / "p.ndjson", records);
  const auto back = read_ndjson(dir / "p.ndjson");
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i]["schema_version"] == std::string(kSchemaVersion));
    CHECK(back[i]["config_digest"] == "feedfacecafebeef");
    CHECK(back[i]["M_end"].get<double>() == values[2 * i]);
    CHECK(back[i]["N_end"].get<double>() == values[2 * i + 1]);
    CHECK(back[i]["qv_M_inc"].get<double>() == std::nextafter(1.0, 2.0));
  }
}

TEST_CASE("concurrent writers to distinct sinks do not interleave") {
  const auto dir = fresh_dir("concurrent");
  constexpr int kWriters = 4;
  constexpr int kLines = 500;
  std::vector<std::thread> threads;
  for (int w = 0; w < kWriters; ++w) {
    threads.emplace_back([&dir, w] {
      std::vector<Json> recs;
      for (int i = 0; i < kLines; ++i) {
        recs.push_back(Json{{"schema_version", kSchemaVersion}, {"writer", w}, {"i", i}, {"pad", std::string(200, 'x')}});
      }
      for (int rep = 0; rep < 5; ++rep) write_ndjson(dir / ("w" + std::to_string(w) + ".ndjson"), recs);
    });
  }
  for (auto& t : threads) t.join();
  for (int w = 0; w < kWriters; ++w) {
    const auto recs = read_ndjson(dir / ("w" + std::to_string(w) + ".ndjson"));
    REQUIRE(recs.size() == kLines);
    for (int i = 0; i < kLines; ++i) {
      CHECK(recs[i]["writer"] == w);
      CHECK(recs[i]["i"] == i);
    }
  }
}

TEST_CASE("readers reject unknown schema major versions") {
  CHECK_NOTHROW(check_schema_version(Json{{"schema_version", "1.7"}}));
  const auto code = [](const Json& j) {
    try {
      check_schema_version(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code(Json{{"schema_version", "2.0"}}) == ErrorCode::SchemaVersion);
  CHECK(code(Json{{"kind", "path"}}) == ErrorCode::SchemaVersion);

  const auto dir = fresh_dir("schema");
  {
    std::ofstream out(dir / "bad.ndjson");
    out << R"({"schema_version":"1.0","i":1})" << '\n' << R"({"schema_version":"9.0","i":2})" << '\n';
  }
  CHECK_THROWS_AS(read_ndjson(dir / "bad.ndjson"), Error);
  CHECK_THROWS_AS(read_json(dir / "missing.json"), Error);
}

TEST_CASE("CSV rows must match the header") {
  const auto dir = fresh_dir("csv");
  CHECK_THROWS_AS(write_csv(dir / "x.csv", CsvTable{{"a", "b"}, {{1.0}}}), Error);
}
