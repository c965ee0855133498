#pragma once

#include <string>
#include <vector>

#include "cgholo/config.hpp"

namespace cgholo {

struct RunOptions {
  bool plots = false;
  int ladder_max_k = 10;  // deepest dyadic rung s = 2^-k
  unsigned seed = 0;      // sampling seed for curvature spot checks
};

/// One verified (or failed) quantitative claim in the report.
struct Claim {
  std::string job;     // job label (the job's `label` key, or its kind)
  std::string name;    // e.g. tension_slope, c1_match
  std::string anchor;  // stable claim identifier, e.g. tension-vanishing-order
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct RunResult {
  std::vector<Claim> claims;
  int exit_code = 0;  // 0 all pass, 1 any claim failed
};

/// Executes every [job] section, writes report.json and samples.csv (and
/// plots/*.svg when enabled) into out_dir. Throws on configuration or
/// runtime errors; the caller maps those to exit code 2.
RunResult run_config(const Config& cfg, const std::string& out_dir,
                     const RunOptions& opts = {});

RunResult run_config_file(const std::string& path, const std::string& out_dir,
                          const RunOptions& opts = {});

}  // namespace cgholo
