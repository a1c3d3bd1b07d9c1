#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "grid.hpp"

namespace tsrlab {

// Per-action transition matrices plus a state-action policy, used for the
// closed-form occupancy computations. Unlike Gridworld dynamics there are no
// terminal states here unless the caller builds them in: the Fig-style
// diffusion fields come from pure random walks.
struct TransitionModel {
  std::vector<Eigen::MatrixXd> t_action;  // one S-by-S matrix per action
  Eigen::MatrixXd policy;                 // S-by-A, rows sum to 1

  int num_states() const {
    return t_action.empty() ? 0 : static_cast<int>(t_action[0].rows());
  }
  int num_actions() const { return static_cast<int>(t_action.size()); }

  // Policy-averaged transition matrix: row s is sum_a policy(s,a) * T_a(s,:).
  Eigen::MatrixXd policy_transition() const;

  // Throws unless every matrix is row-stochastic and shapes agree.
  void validate() const;
};

// Random-walk (uniform policy, bump-on-wall) model over all non-wall cells of
// a layout. Lava and goal cells are treated as ordinary floor: this models
// diffusion over the map's geometry, not the episodic task.
TransitionModel diffusion_model(const GridLayout& layout);

// Random walk on an open width x height grid with no obstacles.
TransitionModel open_grid_model(int width, int height);

// Expected discounted state occupancies M = sum_t (gamma * T_pi)^t, including
// the t=0 self-occupancy, computed as the solution of (I - gamma*T_pi) M = I.
Eigen::MatrixXd analytic_sr(const TransitionModel& model, double gamma);

// Partial sum of the first n_terms terms of the same series.
Eigen::MatrixXd neumann_sr(const TransitionModel& model, double gamma,
                           int n_terms);

// Occupancies conditioned on repeating action a for j steps before resuming
// the policy: M_a = sum_{k=0}^{j-1} (gamma*T_a)^k + (gamma*T_a)^j * M_policy.
// The repeat sum stops at k = j-1 because the trailing factor's leading
// identity term already accounts for the state reached at step j.
std::vector<Eigen::MatrixXd> analytic_tsr(const TransitionModel& model,
                                          double gamma, int j);

// Rollout estimate of the same occupancies, with per-entry standard errors.
// With action < 0 the rollouts follow the policy from step 0 (plain SR);
// otherwise they execute `action` for `repeat` steps first. Rows lists the
// start states to estimate (empty = all states).
struct McEstimate {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd stderr_;
  std::vector<int> rows;  // start state of each estimated row
};
McEstimate monte_carlo_sr(const TransitionModel& model, double gamma,
                          int action, int repeat, int n_rollouts, int horizon,
                          std::uint64_t seed, std::vector<int> rows = {});

// One column of an SR matrix laid back onto the grid: field value at a cell
// is the expected discounted time spent at the target when starting there.
struct FieldGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, meaningful where present
  std::vector<char> present;   // 0 for wall cells
  int target_row = 0;
  int target_col = 0;

  double at(int row, int col) const {
    return values[static_cast<size_t>(row) * width + col];
  }
  bool has(int row, int col) const {
    return present[static_cast<size_t>(row) * width + col] != 0;
  }
};

// Projects column `target_state` of M onto the layout's grid. The layout
// must be the one the model was built from (state ids in reading order).
FieldGrid sr_field(const Eigen::MatrixXd& m, int target_state,
                   const GridLayout& layout);

// Same, for an open grid model (every cell present).
FieldGrid sr_field_open(const Eigen::MatrixXd& m, int target_state, int width,
                        int height);

}  // namespace tsrlab
