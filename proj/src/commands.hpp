#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace tsrlab {

// Parameters of the `analytic` subcommand: closed-form occupancy fields on
// either a shipped layout or a plain open grid.
struct AnalyticRequest {
  std::string layout_path;  // empty → use the open grid below
  int grid_width = 5;
  int grid_height = 5;
  double gamma = 0.99;
  int repeat = 1;  // 1 → policy-level field; ≥ 2 → repeat-conditioned
  int action = 1;  // only meaningful for repeat ≥ 2; defaults to east
  int target_row = -1;  // -1 → grid center
  int target_col = -1;
  std::string out_prefix = "sr_field";
};

// Each command throws tsrlab::Error on failure; callers translate that into
// exit codes (CLI) or status codes (C API).
RunArtifacts cmd_run(const std::string& config_path,
                     const std::vector<std::string>& overrides);
RunArtifacts cmd_analytic(const AnalyticRequest& req);
RunArtifacts cmd_plot(const std::vector<std::string>& csv_paths,
                      const std::string& out_dir);
void cmd_validate_layout(const std::string& path);

}  // namespace tsrlab
