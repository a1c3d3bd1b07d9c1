#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "grid.hpp"
#include "rng.hpp"
#include "tabular.hpp"

namespace tsrlab {

struct AgentConfig {
  double alpha = 1.0;    // occupancy / action-value learning rate
  double alpha_r = 1.0;  // reward-vector learning rate
  double gamma = 0.99;
  double epsilon = 0.05;
  int j_max = 7;

  void validate() const;
};

// Expected discounted occupancy rows per action: m[a](s, s').
using SrTensor = std::vector<MatrixRM>;
// Same, additionally conditioned on the repeat count: m4[a][j-1](s, s').
using SrTensor4 = std::vector<std::vector<MatrixRM>>;

SrTensor make_sr_tensor(int num_states, int num_actions);
SrTensor4 make_sr_tensor4(int num_states, int num_actions, int j_max);

// The primitive trace produced by Gridworld::execute_repeat; every record
// carries the same action, and only the final one may be terminal/truncated.
using RepeatTrace = std::vector<TransitionRecord>;

// One-step Q-learning: Q(s,a) moves toward r + gamma * max_a' Q(s_next, a').
void q_update(QTable& q, int s, int a, double r, int s_next, bool terminal,
              double alpha, double gamma);

// n-step repeat update: the slot for the requested repeat moves toward the
// discounted reward sum over the executed steps, bootstrapped from the
// companion one-step table at the end state. The companion table then gets a
// q_update for every primitive transition; both targets are computed from
// the tables as they stood on entry.
void skip_q_update(SkipQTable& sq, QTable& q, const RepeatTrace& trace,
                   int j_requested, double alpha, double gamma);

// TD update of one occupancy row toward its own self-occupancy plus the
// discounted successor row of `bootstrap_action`. A terminal successor
// contributes a single discounted occupancy of itself instead of a row.
void sr_td_row_update(SrTensor& m, int s, int a, int s_next,
                      int bootstrap_action, bool terminal, double alpha,
                      double gamma);

// The SR agent's per-transition update: the bootstrap action is the greedy
// action under M*W at the successor (computed before anything changes), then
// the occupancy row and the reward vector are updated.
void sr_update(SrTensor& m, Eigen::VectorXd& w, int s, int a, double r,
               int s_next, bool terminal, const AgentConfig& cfg);

// Repeat-conditioned occupancy update over a whole executed trace: the
// target accumulates the observed discounted occupancies of the visited
// states and bootstraps from the jointly greedy (action, repeat) row at the
// end state (or the end state's own occupancy if terminal). W is updated on
// every primitive transition.
void tsr_update(SrTensor4& m, Eigen::VectorXd& w, const RepeatTrace& trace,
                int j_requested, const AgentConfig& cfg);

// Values from linearly combining occupancies with the reward vector.
Eigen::VectorXd sr_q_values(const SrTensor& m, const Eigen::VectorXd& w,
                            int s);                         // per action
Eigen::MatrixXd tsr_q_values(const SrTensor4& m, const Eigen::VectorXd& w,
                             int s);                        // action x repeat

// Greedy (action, repeat) pair: the action maximizes the best-repeat value
// (first index on ties); the repeat is the longest one attaining that
// action's maximum, so equal-value commitments resolve to fewer decisions.
Decision tsr_greedy_pair(const SrTensor4& m, const Eigen::VectorXd& w, int s);

// epsilon-greedy over actions via their best-repeat values; the repeat stays
// greedy (exploration perturbs the action only).
Decision tsr_select(const SrTensor4& m, const Eigen::VectorXd& w, int s,
                    double epsilon, Rng& rng);

// Control-agent selection: epsilon-greedy over one-step values; the repeat
// is 1 except that exploration draws it uniformly from 1..j_max.
Decision select_random_skip(Rng& rng, std::span<const double> action_values,
                            double epsilon, int j_max);

enum class AgentKind : int {
  Q = 0,
  SkipQ = 1,
  Sr = 2,
  SrRandomSkip = 3,
  Tsr = 4,
};

const char* agent_kind_name(AgentKind kind);
AgentKind agent_kind_from_name(const std::string& name);

class Agent {
 public:
  virtual ~Agent() = default;

  virtual AgentKind kind() const = 0;
  virtual int num_states() const = 0;
  // Training-time decision; consumes RNG draws.
  virtual Decision select(int state, Rng& rng) = 0;
  // Greedy decision with deterministic tie-breaking; consumes no draws.
  virtual Decision select_greedy(int state) const = 0;
  // Learn from one executed decision's primitive trace.
  virtual void observe(const RepeatTrace& trace, int j_requested) = 0;
  // Greedy decision for every state (cached; updated incrementally).
  virtual const GreedyPolicy& greedy_policy() const = 0;
  // Order-stable hash of all learned tables, for retention checks.
  virtual std::uint64_t table_fingerprint() const = 0;
};

std::unique_ptr<Agent> make_agent(AgentKind kind, int num_states,
                                  const AgentConfig& cfg);

}  // namespace tsrlab
