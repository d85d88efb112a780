#include "anderson/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "anderson/ids.hpp"

namespace anderson {

namespace {

const std::set<std::string> kKnownKeys = {
    "model.d",          "model.n",          "model.h",
    "model.m_list",     "model.L_list",     "model.interaction",
    "model.u0",         "model.r0",         "model.table",
    "model.norm",       "model.dim_cap",    "disorder.distribution",
    "disorder.v_max",   "disorder.p",       "disorder.rate",
    "disorder.cap",     "disorder.seed",    "disorder.R",
    "task.e_min",       "task.e_max",       "task.e_points",
    "task.fit_e0",      "task.fit_window_lo", "task.fit_window_hi",
    "task.fit_n_lo",    "task.fit_n_hi",    "task.e_probe",
    "task.weyl_k",      "task.weyl_m_list", "task.tol",
    "output.dir",       "output.prefix",
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail_key(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config key '" + key + "': " + what);
}

class TypedReader {
 public:
  explicit TypedReader(const RawConfig& raw) : raw_(raw) {}

  bool has(const std::string& key) const {
    return raw_.entries.count(key) != 0;
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = raw_.entries.find(key);
    return it == raw_.entries.end() ? fallback : trim(it->second.value);
  }

  std::string require_str(const std::string& key) const {
    auto it = raw_.entries.find(key);
    if (it == raw_.entries.end()) fail_key(key, "mandatory key is missing");
    return trim(it->second.value);
  }

  double num(const std::string& key, double fallback) const {
    return has(key) ? parse_double(key, require_str(key)) : fallback;
  }

  double require_num(const std::string& key) const {
    return parse_double(key, require_str(key));
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? parse_int(key, require_str(key)) : fallback;
  }

  std::int64_t require_int(const std::string& key) const {
    return parse_int(key, require_str(key));
  }

  std::uint64_t require_uint(const std::string& key) const {
    const std::string text = require_str(key);
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      fail_key(key, "expected a non-negative integer, got '" + text + "'");
    }
  }

  std::vector<double> num_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& tok : split_list(require_str(key), key)) {
      out.push_back(parse_double(key, tok));
    }
    return out;
  }

  std::vector<std::int64_t> int_list(const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const std::string& tok : split_list(require_str(key), key)) {
      out.push_back(parse_int(key, tok));
    }
    return out;
  }

 private:
  static std::vector<std::string> split_list(const std::string& text,
                                             const std::string& key) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail_key(key, "empty element in list '" + text + "'");
      out.push_back(item);
    }
    if (out.empty()) fail_key(key, "expected a non-empty list");
    return out;
  }

  static double parse_double(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      fail_key(key, "expected a number, got '" + text + "'");
    }
  }

  static std::int64_t parse_int(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      fail_key(key, "expected an integer, got '" + text + "'");
    }
  }

  const RawConfig& raw_;
};

int require_positive_int(const TypedReader& r, const std::string& key) {
  const std::int64_t v = r.require_int(key);
  if (v < 1 || v > std::numeric_limits<int>::max()) {
    fail_key(key, "must be a positive integer, got " + std::to_string(v));
  }
  return static_cast<int>(v);
}

}  // namespace

RawConfig parse_config_text(const std::string& text, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  std::stringstream stream(text);
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) +
                                  ": missing key before '='");
    }
    auto [it, inserted] = raw.entries.emplace(key, RawConfig::Entry{value, lineno});
    if (!inserted) {
      throw std::invalid_argument(
          source + ":" + std::to_string(lineno) + ": duplicate key '" + key +
          "' (first defined at line " + std::to_string(it->second.line) + ")");
    }
  }
  return raw;
}

RawConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void apply_override(RawConfig& raw, const std::string& key_equals_value) {
  const std::size_t eq = key_equals_value.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override '" + key_equals_value +
                                "' is not of the form key=value");
  }
  const std::string key = trim(key_equals_value.substr(0, eq));
  const std::string value = trim(key_equals_value.substr(eq + 1));
  if (key.empty()) {
    throw std::invalid_argument("override '" + key_equals_value + "' has an empty key");
  }
  raw.entries[key] = RawConfig::Entry{value, 0};
}

ExperimentConfig build_config(const RawConfig& raw) {
  for (const auto& [key, entry] : raw.entries) {
    if (kKnownKeys.count(key) == 0) {
      throw std::invalid_argument("unknown config key '" + key + "' (line " +
                                  std::to_string(entry.line) + ")");
    }
  }

  TypedReader r(raw);
  ExperimentConfig cfg;

  // model block
  cfg.model.d = require_positive_int(r, "model.d");
  cfg.model.n = require_positive_int(r, "model.n");
  cfg.model.h = r.require_num("model.h");
  if (!(cfg.model.h > 0.0)) fail_key("model.h", "must be positive");
  cfg.model.dim_cap = r.integer("model.dim_cap", 1'000'000);
  if (cfg.model.dim_cap < 1) fail_key("model.dim_cap", "must be positive");

  const bool has_m = r.has("model.m_list");
  const bool has_L = r.has("model.L_list");
  if (has_m == has_L) {
    fail_key(has_m ? "model.L_list" : "model.m_list",
             "exactly one of model.m_list and model.L_list must be given");
  }
  if (has_m) {
    for (std::int64_t m : r.int_list("model.m_list")) {
      if (m < 1) fail_key("model.m_list", "sides must be positive");
      cfg.m_list.push_back(static_cast<int>(m));
    }
  } else {
    for (double L : r.num_list("model.L_list")) {
      cfg.m_list.push_back(detail::box_sites_from_side(L, cfg.model.h));
    }
  }
  std::sort(cfg.m_list.begin(), cfg.m_list.end());
  cfg.m_list.erase(std::unique(cfg.m_list.begin(), cfg.m_list.end()), cfg.m_list.end());
  for (int m : cfg.m_list) cfg.L_list.push_back(m * cfg.model.h);

  const std::string kind = r.str("model.interaction", "none");
  if (kind == "none") {
    cfg.model.kernel.kind = KernelKind::None;
  } else if (kind == "hard_sphere") {
    cfg.model.kernel.kind = KernelKind::HardSphere;
  } else if (kind == "yukawa") {
    cfg.model.kernel.kind = KernelKind::Yukawa;
  } else if (kind == "table") {
    cfg.model.kernel.kind = KernelKind::Table;
  } else {
    fail_key("model.interaction",
             "expected one of none, hard_sphere, yukawa, table; got '" + kind + "'");
  }
  cfg.model.kernel.u0 = r.num("model.u0", 1.0);
  if (cfg.model.kernel.u0 < 0.0) fail_key("model.u0", "must be non-negative");
  cfg.model.kernel.r0 = r.num("model.r0", 1.0);
  if (cfg.model.kernel.r0 < 0.0) fail_key("model.r0", "must be non-negative");
  if (cfg.model.kernel.kind == KernelKind::Table) {
    if (!r.has("model.table")) fail_key("model.table", "mandatory for table kernels");
    cfg.model.kernel.table = r.num_list("model.table");
    for (double v : cfg.model.kernel.table) {
      if (v < 0.0) fail_key("model.table", "entries must be non-negative");
    }
  } else if (r.has("model.table")) {
    fail_key("model.table", "only valid for table kernels");
  }
  const std::string norm = r.str("model.norm", "max");
  if (norm == "max") {
    cfg.model.kernel.norm = PairNorm::Max;
  } else if (norm == "euclid") {
    cfg.model.kernel.norm = PairNorm::Euclid;
  } else {
    fail_key("model.norm", "expected max or euclid, got '" + norm + "'");
  }

  // disorder block
  const std::string dist = r.require_str("disorder.distribution");
  if (dist == "uniform") {
    cfg.disorder.distribution = DistKind::Uniform;
  } else if (dist == "bernoulli") {
    cfg.disorder.distribution = DistKind::Bernoulli;
  } else if (dist == "exponential") {
    cfg.disorder.distribution = DistKind::Exponential;
  } else {
    fail_key("disorder.distribution",
             "expected one of uniform, bernoulli, exponential; got '" + dist + "'");
  }
  cfg.disorder.v_max = r.num("disorder.v_max", 1.0);
  if (cfg.disorder.v_max < 0.0) fail_key("disorder.v_max", "must be non-negative");
  cfg.disorder.p = r.num("disorder.p", 0.5);
  if (cfg.disorder.p < 0.0 || cfg.disorder.p > 1.0) {
    fail_key("disorder.p", "must lie in [0, 1]");
  }
  cfg.disorder.rate = r.num("disorder.rate", 1.0);
  if (!(cfg.disorder.rate > 0.0)) fail_key("disorder.rate", "must be positive");
  cfg.disorder.cap = r.num("disorder.cap", 10.0);
  if (cfg.disorder.cap < 0.0) fail_key("disorder.cap", "must be non-negative");
  cfg.disorder.seed = r.require_uint("disorder.seed");
  cfg.disorder.realization_count = require_positive_int(r, "disorder.R");

  // task block
  cfg.task.e_min = r.num("task.e_min", 0.0);
  cfg.task.e_max = r.num("task.e_max", 1.0);
  const std::int64_t pts = r.integer("task.e_points", 101);
  if (pts < 1 || pts > 1'000'000) fail_key("task.e_points", "must be in [1, 1e6]");
  cfg.task.e_points = static_cast<int>(pts);
  if (cfg.task.e_points > 1 && !(cfg.task.e_max > cfg.task.e_min)) {
    fail_key("task.e_max", "must exceed task.e_min");
  }
  cfg.task.fit_e0 = r.num("task.fit_e0", 0.0);
  if (r.has("task.fit_window_lo") != r.has("task.fit_window_hi")) {
    fail_key("task.fit_window_lo", "fit window needs both edges or neither");
  }
  if (r.has("task.fit_window_lo")) {
    cfg.task.fit_window_lo = r.require_num("task.fit_window_lo");
    cfg.task.fit_window_hi = r.require_num("task.fit_window_hi");
  }
  cfg.task.fit_n_lo = r.num("task.fit_n_lo", 1e-6);
  cfg.task.fit_n_hi = r.num("task.fit_n_hi", 1e-1);
  if (!(cfg.task.fit_n_lo > 0.0) || !(cfg.task.fit_n_hi > cfg.task.fit_n_lo) ||
      !(cfg.task.fit_n_hi < 1.0)) {
    fail_key("task.fit_n_lo", "need 0 < fit_n_lo < fit_n_hi < 1");
  }
  if (r.has("task.e_probe")) cfg.task.e_probe = r.require_num("task.e_probe");
  cfg.task.weyl_k = r.has("task.weyl_k") ? require_positive_int(r, "task.weyl_k") : 1;
  if (r.has("task.weyl_m_list")) {
    cfg.task.weyl_m_list.clear();
    for (std::int64_t m : r.int_list("task.weyl_m_list")) {
      if (m < 1) fail_key("task.weyl_m_list", "entries must be positive");
      cfg.task.weyl_m_list.push_back(static_cast<int>(m));
    }
  }
  cfg.task.tol = r.num("task.tol", 1e-9);
  if (!(cfg.task.tol > 0.0)) fail_key("task.tol", "must be positive");

  // output block
  cfg.output.dir = r.str("output.dir", ".");
  cfg.output.prefix = r.str("output.prefix", "anderson");
  if (cfg.output.prefix.empty()) fail_key("output.prefix", "must not be empty");

  // cross checks shared by every subcommand
  for (int m : cfg.m_list) {
    make_grid(cfg.model.params(m));  // validates the dimension cap per box
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  RawConfig raw = parse_config_file(path);
  for (const std::string& o : overrides) apply_override(raw, o);
  return build_config(raw);
}

}  // namespace anderson
