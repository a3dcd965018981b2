#include "amshe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "amshe/errors.hpp"

namespace amshe {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
  });
}

enum class Kind { Number, Integer, Text, List, Atoms, Flag };

struct KeySpec {
  Kind kind;
  std::string fallback;  // empty: computed from other keys
};

using KeyTable = std::map<std::string, KeySpec>;

const KeyTable& common_keys() {
  static const KeyTable table = {
      {"domain.geometry", {Kind::Text, "torus"}},
      {"domain.dimension", {Kind::Integer, "1"}},
      {"domain.length", {Kind::Number, "1"}},
      {"domain.points", {Kind::Integer, "64"}},
      {"kernel.kind", {Kind::Text, ""}},
      {"kernel.shape", {Kind::Text, "bump"}},
      {"kernel.half_width", {Kind::Number, "0.1"}},
      {"kernel.epsilon", {Kind::Number, "1"}},
      {"scheme.dt", {Kind::Number, ""}},
      {"scheme.alpha", {Kind::Number, "1"}},
      {"scheme.beta", {Kind::Number, "1"}},
      {"measure.atoms", {Kind::Atoms, "1 @ 0"}},
      {"run.paths", {Kind::Integer, "10000"}},
      {"run.t_max", {Kind::Number, "20"}},
      {"run.seed", {Kind::Integer, "0"}},
      {"run.record_every", {Kind::Integer, "1"}},
      {"run.threshold", {Kind::Number, "0.001"}},
      {"run.workers", {Kind::Integer, ""}},
  };
  return table;
}

// Experiment keys and the common defaults each experiment overrides.
const std::map<std::string, KeyTable>& experiment_keys() {
  static const std::map<std::string, KeyTable> table = {
      {"prop15",
       {{"run.paths", {Kind::Integer, "100000"}},
        {"run.starts", {Kind::List, "0.5, 1, 2"}},
        {"run.ks_null_sims", {Kind::Integer, "200"}},
        {"halfplane.dt", {Kind::Number, "0.0001"}},
        {"halfplane.depth_ratio", {Kind::Number, "4"}}}},
      {"cauchy",
       {{"measure.combination", {Kind::Atoms, "0.3 @ 0.2, 0.7 @ 0.6"}},
        {"run.min_converged", {Kind::Number, "0.8"}},
        {"run.q_bins", {Kind::List, "0, 0.05, 0.1, 0.15"}},
        {"run.t_ladder", {Kind::List, "1, 2, 4, 8, 16"}},
        {"run.theta", {Kind::Number, "0.5"}},
        {"run.ks_null_sims", {Kind::Integer, "200"}}}},
      {"qv",
       {{"scheme.alpha", {Kind::Number, "2"}},
        {"run.paths", {Kind::Integer, "1000"}},
        {"run.t_max", {Kind::Number, "1"}},
        {"run.refine", {Kind::Flag, "true"}},
        {"run.q_bins", {Kind::List, "0, 0.05, 0.1, 0.15"}}}},
      {"weak-probe",
       {{"domain.geometry", {Kind::Text, "line"}},
        {"domain.dimension", {Kind::Integer, "3"}},
        {"domain.length", {Kind::Number, "4"}},
        {"domain.points", {Kind::Integer, "16"}},
        {"kernel.half_width", {Kind::Number, "0.6"}},
        {"scheme.beta", {Kind::Number, "0.1"}},
        {"scheme.dt", {Kind::Number, "0.01"}},
        {"run.paths", {Kind::Integer, "200"}},
        {"run.t_max", {Kind::Number, "4"}},
        {"run.record_every", {Kind::Integer, "10"}},
        {"run.contrast_beta", {Kind::Number, "5"}},
        {"run.contrast_dt", {Kind::Number, "0.001"}}}},
      {"stationarity",
       {{"run.t_pair", {Kind::List, "10, 12"}},
        {"run.t_ladder", {Kind::List, "2, 4, 8, 16"}},
        {"run.ladder_paths", {Kind::Integer, "1000"}},
        {"run.null_perms", {Kind::Integer, "1000"}},
        {"run.shift", {Kind::Integer, "16"}},
        {"run.xi", {Kind::Number, "1"}},
        {"run.p", {Kind::Number, "1"}}}},
      {"attenuated-2d",
       {{"domain.dimension", {Kind::Integer, "2"}},
        {"domain.points", {Kind::Integer, "512"}},
        {"kernel.half_width", {Kind::Number, "0.25"}},
        {"scheme.beta", {Kind::Number, "2.5066282746310002"}},
        {"scheme.alpha", {Kind::Number, "1"}},
        {"run.eps_list", {Kind::List, "0.125, 0.0625, 0.03125"}},
        {"run.t", {Kind::Number, "0.00390625"}},
        {"run.paths", {Kind::Integer, "64"}},
        {"run.sample_stride", {Kind::Integer, "32"}},
        {"run.dt_scale", {Kind::Number, "0.05"}},
        {"run.subcritical_beta", {Kind::Number, "1"}},
        {"run.subcritical_eps", {Kind::Number, "0.125"}},
        {"run.subcritical_t", {Kind::Number, "0.01"}},
        {"run.supercritical_paths", {Kind::Integer, "8"}},
        {"run.supercritical_beta", {Kind::Number, "3"}},
        {"run.trim", {Kind::Number, "0.001"}}}},
      {"frac-moment",
       {{"scheme.alpha", {Kind::Number, "0"}},
        {"run.t_max", {Kind::Number, "16"}},
        {"run.t_ladder", {Kind::List, "1, 2, 4, 8, 16"}},
        {"run.theta", {Kind::Number, "0.5"}}}},
      {"mixed-sign-explore",
       {{"measure.atoms", {Kind::Atoms, "1 @ 0.25, -0.5 @ 0.75"}},
        {"run.paths", {Kind::Integer, "2000"}}}},
  };
  return table;
}

double parse_double(std::string_view text, const std::string& key) {
  const auto t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    fail(ErrorCode::ConfigValidation, key + ": '" + std::string(t) + "' is not a finite number");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text, const std::string& key) {
  const auto t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    fail(ErrorCode::ConfigValidation, key + ": '" + std::string(t) + "' is not a nonnegative integer");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_atoms(const std::vector<Atom>& atoms, int dimension) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ", ";
    out += format_number(atoms[i].gamma) + " @";
    for (int a = 0; a < dimension; ++a) out += " " + format_number(atoms[i].x[static_cast<std::size_t>(a)]);
  }
  return out;
}

std::string format_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_number(xs[i]);
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("AMSHE_WORKERS")) {
    unsigned v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && v > 0) return v;
  }
  return 1;
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (!valid_key(key)) fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": malformed key '" + key + "'");
      if (const auto it = doc.entries_.find(key); it != doc.entries_.end()) {
        fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": duplicate key '" + key +
                                         "' (first set on line " + std::to_string(it->second.line) + ")");
      }
      doc.entries_[key] = Entry{value, line_no};
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return doc;
}

ConfigDocument ConfigDocument::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const ConfigDocument::Entry& ConfigDocument::at(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail(ErrorCode::ConfigValidation, "missing key '" + key + "'");
  return it->second;
}

void ConfigDocument::set(const std::string& key, std::string value) {
  if (!valid_key(key)) fail(ErrorCode::ConfigParse, "malformed key '" + key + "'");
  entries_[key] = Entry{std::move(value), 0};
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"prop15",       "cauchy",        "qv",          "weak-probe",
                                                 "stationarity", "attenuated-2d", "frac-moment", "mixed-sign-explore"};
  return names;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto item : split(text, ',')) out.push_back(parse_double(item, "list"));
  return out;
}

std::vector<Atom> parse_atoms(std::string_view text, int dimension) {
  std::vector<Atom> atoms;
  if (trim(text).empty()) return atoms;
  for (auto item : split(text, ',')) {
    const auto at = item.find('@');
    if (at == std::string_view::npos) {
      fail(ErrorCode::ConfigValidation, "atom '" + std::string(item) + "' must read 'weight @ coordinates'");
    }
    Atom atom;
    atom.gamma = parse_double(item.substr(0, at), "atom weight");
    std::vector<double> coords;
    std::istringstream ss{std::string(trim(item.substr(at + 1)))};
    std::string tok;
    while (ss >> tok) coords.push_back(parse_double(tok, "atom coordinate"));
    if (coords.size() == 1 && dimension > 1) coords.assign(static_cast<std::size_t>(dimension), coords.front());
    if (coords.size() != static_cast<std::size_t>(dimension)) {
      fail(ErrorCode::ConfigValidation, "atom '" + std::string(item) + "' needs " + std::to_string(dimension) + " coordinates");
    }
    for (std::size_t a = 0; a < coords.size(); ++a) atom.x[a] = coords[a];
    atoms.push_back(atom);
  }
  return atoms;
}

std::string ExperimentConfig::canonical_text() const {
  std::string out = "experiment=" + experiment + "\n";
  for (const auto& [k, v] : values) out += k + "=" + v + "\n";
  return out;
}

std::string ExperimentConfig::digest() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text())));
  return buf;
}

double ExperimentConfig::number(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) fail(ErrorCode::ConfigValidation, "experiment " + experiment + " has no key '" + key + "'");
  return parse_double(it->second, key);
}

std::uint64_t ExperimentConfig::integer(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) fail(ErrorCode::ConfigValidation, "experiment " + experiment + " has no key '" + key + "'");
  return parse_u64(it->second, key);
}

bool ExperimentConfig::flag(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) fail(ErrorCode::ConfigValidation, "experiment " + experiment + " has no key '" + key + "'");
  return it->second == "true";
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) fail(ErrorCode::ConfigValidation, "experiment " + experiment + " has no key '" + key + "'");
  return parse_number_list(it->second);
}

MeasureSpec ExperimentConfig::measure_at(const std::string& key, bool allow_signed) const {
  const auto it = values.find(key);
  if (it == values.end()) fail(ErrorCode::ConfigValidation, "experiment " + experiment + " has no key '" + key + "'");
  return make_measure(parse_atoms(it->second, domain.dimension()), allow_signed);
}

ExperimentConfig materialize(const ConfigDocument& doc, std::string_view experiment) {
  const auto& all = experiment_keys();
  const auto exp_it = all.find(std::string(experiment));
  if (exp_it == all.end()) fail(ErrorCode::ConfigValidation, "unknown experiment '" + std::string(experiment) + "'");

  KeyTable keys = common_keys();
  for (const auto& [k, spec] : exp_it->second) keys[k] = spec;

  for (const auto& [k, entry] : doc.entries()) {
    if (!keys.count(k)) {
      fail(ErrorCode::ConfigValidation,
           "line " + std::to_string(entry.line) + ": key '" + k + "' is not used by experiment " + std::string(experiment));
    }
  }
  auto raw = [&](const std::string& k) -> std::string {
    if (doc.has(k)) return doc.at(k).value;
    return keys.at(k).fallback;
  };

  std::map<std::string, std::string> values;
  const int dimension = static_cast<int>(parse_u64(raw("domain.dimension"), "domain.dimension"));
  const auto geometry = parse_geometry(raw("domain.geometry"));
  const double length = parse_double(raw("domain.length"), "domain.length");
  const auto points = parse_u64(raw("domain.points"), "domain.points");
  std::optional<DomainSpec> domain;
  try {
    domain.emplace(geometry, dimension, length, points);
  } catch (const Error& e) {
    fail(e.code(), std::string("domain.*: ") + e.what());
  }

  std::string kind_text = raw("kernel.kind");
  if (kind_text.empty()) kind_text = dimension == 1 ? "white" : "mollifier";
  KernelSpec kernel;
  kernel.kind = parse_kernel_kind(kind_text);
  if (kernel.kind == KernelKind::White && dimension != 1) {
    fail(ErrorCode::UnsupportedWhiteNoise,
         "kernel.kind=white requires domain.dimension=1 (got domain.dimension=" + std::to_string(dimension) + ")");
  }
  kernel.shape = parse_kernel_shape(raw("kernel.shape"));
  kernel.half_width = parse_double(raw("kernel.half_width"), "kernel.half_width");
  const double eps = parse_double(raw("kernel.epsilon"), "kernel.epsilon");
  if (!(eps > 0.0 && eps <= 1.0)) fail(ErrorCode::ConfigValidation, "kernel.epsilon must lie in (0, 1]");
  if (eps != 1.0) kernel.epsilon = eps;

  std::string dt_text = raw("scheme.dt");
  const double dt = dt_text.empty() ? default_dt(*domain, kernel) : parse_double(dt_text, "scheme.dt");
  SchemeParams scheme{dt, parse_double(raw("scheme.alpha"), "scheme.alpha"),
                      parse_double(raw("scheme.beta"), "scheme.beta")};
  if (!(scheme.dt > 0.0)) fail(ErrorCode::ConfigValidation, "scheme.dt must be positive");
  if (scheme.alpha < 0.0) fail(ErrorCode::ConfigValidation, "scheme.alpha must be >= 0");
  if (scheme.beta < 0.0) fail(ErrorCode::ConfigValidation, "scheme.beta must be >= 0");
  if (kernel.kind == KernelKind::White && scheme.dt > 0.5 * domain->dx() * domain->dx() * (1.0 + 1e-12)) {
    fail(ErrorCode::ConfigValidation, "scheme.dt must be <= domain dx^2/2 for kernel.kind=white");
  }

  for (const auto& [k, spec] : keys) {
    if (k == "run.workers") continue;
    std::string v = raw(k);
    switch (spec.kind) {
      case Kind::Number:
        v = format_number(k == "scheme.dt" ? dt : parse_double(v, k));
        break;
      case Kind::Integer:
        v = std::to_string(parse_u64(v, k));
        break;
      case Kind::List:
        v = format_list(parse_number_list(v));
        break;
      case Kind::Atoms:
        v = format_atoms(parse_atoms(v, dimension), dimension);
        break;
      case Kind::Flag:
        if (v != "true" && v != "false") fail(ErrorCode::ConfigValidation, k + ": expected true or false");
        break;
      case Kind::Text:
        break;
    }
    values[k] = v;
  }
  values["kernel.kind"] = kind_text;
  values["domain.geometry"] = std::string(geometry_name(geometry));

  const bool signed_ok = experiment == "mixed-sign-explore";
  ExperimentConfig cfg{std::string(experiment),
                       *domain,
                       kernel,
                       scheme,
                       make_measure(parse_atoms(values.at("measure.atoms"), dimension), signed_ok),
                       parse_u64(values.at("run.paths"), "run.paths"),
                       parse_double(values.at("run.t_max"), "run.t_max"),
                       parse_u64(values.at("run.seed"), "run.seed"),
                       parse_u64(values.at("run.record_every"), "run.record_every"),
                       parse_double(values.at("run.threshold"), "run.threshold"),
                       doc.has("run.workers") ? static_cast<unsigned>(parse_u64(doc.at("run.workers").value, "run.workers"))
                                              : default_worker_count(),
                       values};
  if (cfg.workers == 0) fail(ErrorCode::ConfigValidation, "run.workers must be >= 1");
  if (cfg.n_paths == 0) fail(ErrorCode::ConfigValidation, "run.paths must be >= 1");
  if (cfg.record_every == 0) fail(ErrorCode::ConfigValidation, "run.record_every must be >= 1");

  if (experiment == "attenuated-2d") {
    if (dimension != 2) fail(ErrorCode::ConfigValidation, "attenuated-2d requires domain.dimension=2");
    const auto eps_list = cfg.numbers("run.eps_list");
    if (eps_list.empty()) fail(ErrorCode::ConfigValidation, "run.eps_list must not be empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0)) fail(ErrorCode::ConfigValidation, "run.eps_list entries must lie in (0, 1)");
      if (i && !(eps_list[i] < eps_list[i - 1])) fail(ErrorCode::ConfigValidation, "run.eps_list must be strictly decreasing");
    }
  }
  if (experiment == "weak-probe" && dimension != 3) fail(ErrorCode::ConfigValidation, "weak-probe requires domain.dimension=3");
  return cfg;
}

ExperimentConfig parse_config(std::string_view text, std::string_view experiment) {
  return materialize(ConfigDocument::parse(text), experiment);
}

}  // namespace amshe
