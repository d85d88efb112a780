#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anderson/disorder.hpp"
#include "anderson/lattice.hpp"

namespace anderson {

/// Raw `key = value` entries with the line each key was defined on.
struct RawConfig {
  struct Entry {
    std::string value;
    int line = 0;  // 0 for command-line overrides
  };
  std::map<std::string, Entry> entries;
  std::string source;  // file path, for messages
};

// Line-oriented parser: `key = value`, `#` starts a comment, blank lines
// ignored, keys dot-scoped. Duplicate keys error with both line numbers.
RawConfig parse_config_file(const std::string& path);
RawConfig parse_config_text(const std::string& text, const std::string& source);

// `--set key=value` style overrides; later overrides replace earlier ones.
void apply_override(RawConfig& raw, const std::string& key_equals_value);

struct TaskConfig {
  double e_min = 0.0;
  double e_max = 1.0;
  int e_points = 101;
  double fit_e0 = 0.0;
  std::optional<double> fit_window_lo;  // energies; both or neither
  std::optional<double> fit_window_hi;
  double fit_n_lo = 1e-6;  // auto-window bounds on the filled fraction
  double fit_n_hi = 1e-1;
  std::optional<double> e_probe;
  int weyl_k = 1;
  std::vector<int> weyl_m_list = {4, 8, 16};
  double tol = 1e-9;
};

struct OutputConfig {
  std::string dir = ".";
  std::string prefix = "anderson";
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<int> m_list;     // box sides in sites, ascending
  std::vector<double> L_list;  // m*h, same order
  DisorderSpec disorder;
  TaskConfig task;
  OutputConfig output;
};

// Typed validation: unknown keys rejected, every module constraint rechecked;
// errors name the offending key.
ExperimentConfig build_config(const RawConfig& raw);

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides);

}  // namespace anderson
