#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amshe/domain.hpp"
#include "amshe/kernel.hpp"
#include "amshe/solver.hpp"

namespace amshe {

/// Flat `key = value` document. Keys are dotted (`domain.points`); `#` starts a
/// comment; blank lines are ignored. Duplicate keys are a parse error.
class ConfigDocument {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static ConfigDocument parse(std::string_view text);
  static ConfigDocument from_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const Entry& at(const std::string& key) const;
  /// Command-line overrides replace file values (line 0).
  void set(const std::string& key, std::string value);
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& experiment_names();

/// Fully materialized configuration of one experiment.
struct ExperimentConfig {
  std::string experiment;
  DomainSpec domain;
  KernelSpec kernel;
  SchemeParams scheme;
  MeasureSpec measure;
  std::size_t n_paths = 0;
  double t_max = 0.0;
  std::uint64_t base_seed = 0;
  std::size_t record_every = 1;
  double threshold = 1e-3;
  /// Worker count; not part of the digest.
  unsigned workers = 1;
  /// Every key with its materialized value, in canonical text form.
  std::map<std::string, std::string> values;

  /// FNV-1a 64 over canonical_text(), as 16 hex digits.
  std::string digest() const;
  std::string canonical_text() const;

  double number(const std::string& key) const;
  std::uint64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  MeasureSpec measure_at(const std::string& key, bool allow_signed = false) const;
};

/// Applies experiment defaults, validates every key, and builds the typed fields.
ExperimentConfig materialize(const ConfigDocument& doc, std::string_view experiment);
ExperimentConfig parse_config(std::string_view text, std::string_view experiment);

/// "0.3 @ 0.25, 0.7 @ 0.75"; coordinates of one atom are separated by spaces.
std::vector<Atom> parse_atoms(std::string_view text, int dimension);
std::vector<double> parse_number_list(std::string_view text);
/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// AMSHE_WORKERS if set and positive, else 1.
unsigned default_worker_count();

}  // namespace amshe
