#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "experiment.hpp"

namespace tsrlab {

// Everything a `run` invocation needs, read from a flat key=value file.
// Recognized keys: layout, agent, episodes_per_phase, seeds, alpha, alpha_r,
// gamma, epsilon, j_max, step_cap, eval_cadence, out_dir.
struct RunConfig {
  std::string layout_path;
  std::vector<AgentKind> agents;     // "agent" accepts a comma list
  std::vector<std::uint64_t> seeds;  // default 0..49
  ExperimentParams params;
  std::string out_dir = "out";

  void validate() const;
};

// Parses config text: one key=value per line, '#' starts a comment, blank
// lines ignored, later assignments win. Unknown keys are an error.
RunConfig parse_run_config(const std::string& text);

// Reads the file at `path`, then applies `overrides` (more key=value
// strings) on top.
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides);

struct RunArtifacts {
  std::vector<std::string> files;  // paths written, in write order
};

// Runs every (agent, seed) combination and writes one CSV per seed plus one
// aggregate CSV per agent into out_dir. Seed jobs run on a small thread
// pool (TSRLAB_SEED_WORKERS overrides the worker count); all writes happen
// after the jobs finish, so outputs are byte-deterministic.
RunArtifacts execute_run(const RunConfig& cfg);

}  // namespace tsrlab
