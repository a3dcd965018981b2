#include "amshe/records.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "amshe/config.hpp"
#include "amshe/errors.hpp"

namespace amshe {

namespace {

std::atomic<unsigned long> tmp_counter{0};

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(tmp_counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) fail(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::Io, "cannot move output into " + path.string());
  }
}

std::string dump_json(const Json& value) { return value.dump(2); }

void write_json(const std::filesystem::path& path, const Json& value) { write_text_atomic(path, dump_json(value) + "\n"); }

void write_ndjson(const std::filesystem::path& path, const std::vector<Json>& records) {
  std::string text;
  for (const auto& r : records) {
    text += r.dump();
    text += '\n';
  }
  write_text_atomic(path, text);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::string text;
  for (std::size_t i = 0; i < table.columns.size(); ++i) text += (i ? "," : "") + table.columns[i];
  text += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) fail(ErrorCode::InvalidArgument, "CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_number(row[i]);
    text += '\n';
  }
  write_text_atomic(path, text);
}

void check_schema_version(const Json& record) {
  if (!record.is_object() || !record.contains("schema_version") || !record["schema_version"].is_string()) {
    fail(ErrorCode::SchemaVersion, "record has no schema_version");
  }
  const auto version = record["schema_version"].get<std::string>();
  const auto major = version.substr(0, version.find('.'));
  const auto ours = std::string(kSchemaVersion.substr(0, kSchemaVersion.find('.')));
  if (major != ours) fail(ErrorCode::SchemaVersion, "unsupported schema_version " + version);
}

Json read_json(const std::filesystem::path& path) {
  Json value;
  try {
    value = Json::parse(read_all(path));
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Io, path.string() + ": " + e.what());
  }
  check_schema_version(value);
  return value;
}

std::vector<Json> read_ndjson(const std::filesystem::path& path) {
  std::vector<Json> out;
  std::istringstream in(read_all(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::Io, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    check_schema_version(out.back());
  }
  return out;
}

}  // namespace amshe
