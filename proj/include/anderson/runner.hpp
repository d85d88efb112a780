#pragma once

#include <string>
#include <vector>

#include "anderson/config.hpp"

namespace anderson {

inline const std::vector<std::string> kSubcommands = {
    "spectrum", "ids", "fit", "compare", "weyl", "edge"};

// Output CSV path for a subcommand under the config's output block.
std::string output_path(const ExperimentConfig& cfg, const std::string& subcommand);

// Executes one subcommand and writes its CSV. Throws on any module error;
// the CLI wrapper turns that into a nonzero exit status. Output is byte
// identical for any worker count.
void run_subcommand(const ExperimentConfig& cfg, const std::string& subcommand,
                    int workers);

// Energy grid from the task block: e_points values from e_min to e_max.
std::vector<double> task_energy_grid(const TaskConfig& task);

// Formats a double with 12 significant digits (the CSV convention).
std::string format_value(double v);

}  // namespace anderson
