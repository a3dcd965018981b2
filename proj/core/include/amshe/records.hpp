#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace amshe {

using Json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "1.0";

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes to a unique temporary file next to `path`, then renames it into place.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

/// Serialized with shortest round-trip number formatting.
std::string dump_json(const Json& value);

void write_json(const std::filesystem::path& path, const Json& value);
void write_ndjson(const std::filesystem::path& path, const std::vector<Json>& records);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Fails with SchemaVersion unless the record carries a supported schema_version.
void check_schema_version(const Json& record);

Json read_json(const std::filesystem::path& path);
std::vector<Json> read_ndjson(const std::filesystem::path& path);

}  // namespace amshe
