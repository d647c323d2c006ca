#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace collspin {

const char* collspin_version();

// Files written by one experiment run, plus the figure-target verdict
// (always true for kinds without tolerance bands).
struct ExperimentArtifacts {
  std::vector<std::string> files;
  bool tolerance_pass = true;
};

// Runs one configured experiment and writes its CSV artifacts, a metadata
// file with the resolved configuration, and (for figure targets) a
// machine-readable PASS/FAIL summary into config.out_dir.  Throws
// ConfigError for configuration problems and std::runtime_error for
// numerical failures.
ExperimentArtifacts run_experiment(const ExperimentConfig& config);

// Figure entry point used by the command line: optional system-size
// override, artifacts written as by run_experiment with kind = figure.
ExperimentArtifacts run_figure_target(const std::string& id,
                                      const std::vector<int>& n_values,
                                      const std::string& out_dir);

}  // namespace collspin
