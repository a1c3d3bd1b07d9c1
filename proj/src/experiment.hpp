#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agents.hpp"
#include "grid.hpp"

namespace tsrlab {

// Knobs of one training run. The CLI layers layout/agent/seed selection and
// output handling on top of this.
struct ExperimentParams {
  int episodes_per_phase = 10000;
  int step_cap = 1000;  // also caps evaluation episodes
  int eval_cadence = 1;  // evaluate every n-th episode (plus episode 0)
  AgentConfig agent;

  void validate() const;
};

// One row of a learning curve: the greedy policy's performance after this
// training episode, plus how much the greedy policy moved.
struct EpisodeRecord {
  int phase = 1;    // 1 before the goal switch, 2 after
  int episode = 0;  // index within the phase
  double eval_return = 0.0;
  int eval_transitions = 0;
  int eval_decisions = 0;
  double tv = 0.0;  // policy change vs. the previous episode
};

struct EvalResult {
  double ret = 0.0;
  int transitions = 0;
  int decisions = 0;
  bool truncated = false;
};

struct RunOutput {
  std::vector<EpisodeRecord> records;  // 2 * episodes_per_phase rows
  // Table hashes captured at the start of each phase; phase 2's equals the
  // hash at the end of phase 1 exactly when nothing was reset at the switch.
  std::array<std::uint64_t, 2> phase_start_fingerprints{};
};

// One training episode from the start state: select, execute, learn, repeat
// until the episode terminates or hits the step cap.
void train_episode(Agent& agent, const Gridworld& env, Rng& rng);

// One deterministic episode under the greedy policy: no learning, no random
// draws. `decisions` counts policy queries; each may span several
// transitions.
EvalResult evaluate_greedy(const Agent& agent, const Gridworld& env,
                           int eval_step_cap);

// The full reward-revaluation protocol for one seed: train on goal 0, switch
// the payout to goal 1 keeping all learned tables, train again. Every
// episode gets a record; between evaluation episodes (cadence > 1) the last
// evaluation's numbers are carried forward.
RunOutput run_revaluation(const GridLayout& layout, AgentKind kind,
                          const ExperimentParams& params, std::uint64_t seed);

// Per-episode mean and standard error over seeds for each recorded metric.
struct AggregateSeries {
  std::vector<int> phase;
  std::vector<int> episode;
  std::vector<double> return_mean, return_stderr;
  std::vector<double> transitions_mean, transitions_stderr;
  std::vector<double> decisions_mean, decisions_stderr;
  std::vector<double> tv_mean, tv_stderr;

  size_t size() const { return phase.size(); }
};

AggregateSeries aggregate(const std::vector<std::vector<EpisodeRecord>>& runs);

// First index at which `transitions` equals `optimal` and stays there for at
// least `window` consecutive entries; nullopt if that never happens.
std::optional<int> episodes_to_convergence(std::span<const double> transitions,
                                           double optimal, int window);

}  // namespace tsrlab
