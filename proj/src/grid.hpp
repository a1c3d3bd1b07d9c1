#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace tsrlab {

enum class CellKind : std::uint8_t {
  Wall,           // '#': impassable, not a state
  Floor,          // '.': ordinary cell
  Lava,           // 'L': terminal, reward -1
  GoalCandidate,  // 'G': terminal +1 when active, plain floor otherwise
  Start,          // 'S': episode start cell
};

// North, East, South, West — in that index order everywhere.
inline constexpr int kNumActions = 4;
inline constexpr int kRowDelta[kNumActions] = {-1, 0, 1, 0};
inline constexpr int kColDelta[kNumActions] = {0, 1, 0, -1};

const char* action_name(int action);
int action_from_name(const std::string& name);  // case-insensitive

struct Coord {
  int row = 0;
  int col = 0;

  bool operator==(const Coord&) const = default;
};

// Immutable parse of an ASCII map. Exactly one 'S' and exactly two 'G's are
// required; goal candidates are indexed 0 and 1 in reading order.
class GridLayout {
 public:
  static GridLayout parse(const std::string& text);
  static GridLayout load(const std::string& path);

  int width() const { return width_; }
  int height() const { return height_; }
  CellKind cell(int row, int col) const;
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }
  Coord start() const { return start_; }
  const std::vector<Coord>& goal_candidates() const { return goals_; }

  // Non-wall cells that cannot be reached from the start by moves through
  // passable cells. Lava and goal candidates count as reachable when they are
  // adjacent to the reachable region (an agent can step into them), but paths
  // are only traced through floor, start and goal cells.
  std::vector<Coord> unreachable_cells() const;

 private:
  GridLayout() = default;

  int width_ = 0;
  int height_ = 0;
  std::vector<CellKind> cells_;  // row-major
  Coord start_;
  std::vector<Coord> goals_;
};

struct StepOutcome {
  int next_state = 0;
  double reward = 0.0;
  bool terminal = false;
  bool truncated = false;
};

struct TransitionRecord {
  int state = 0;
  int action = 0;
  StepOutcome outcome;
};

// Per-action dynamics of the induced MDP with terminal states made absorbing
// (self-loop, reward 0), so each row of every transition matrix sums to 1.
struct TabularDynamics {
  std::vector<Eigen::MatrixXd> transition;  // one S-by-S matrix per action
  Eigen::MatrixXd reward;                   // S-by-A expected one-step reward
};

// The MDP induced by a layout. States enumerate the non-wall cells in
// reading order. The only mutable piece is which goal candidate pays out.
class Gridworld {
 public:
  explicit Gridworld(GridLayout layout, int active_goal = 0,
                     int step_cap = 1000);

  const GridLayout& layout() const { return layout_; }
  int num_states() const { return static_cast<int>(state_coords_.size()); }
  int start_state() const { return start_state_; }
  int step_cap() const { return step_cap_; }

  int active_goal() const { return active_goal_; }
  void set_active_goal(int goal);

  Coord coord_of(int state) const;
  int state_at(Coord c) const;  // -1 for walls / out of bounds
  bool is_terminal(int state) const;

  // One primitive move. Walking into a wall or off the grid stays in place.
  // The reward is -1 entering lava, +1 entering the active goal, 0 otherwise.
  StepOutcome step(int state, int action) const;

  // Repeats `action` up to `repeat` times, stopping early at a terminal
  // state or when the step budget (step_cap, counted from steps_so_far)
  // runs out. Returns one record per primitive step actually taken.
  std::vector<TransitionRecord> execute_repeat(int state, int action,
                                               int repeat,
                                               int steps_so_far) const;

  TabularDynamics export_dynamics() const;

 private:
  GridLayout layout_;
  int active_goal_;
  int step_cap_;
  std::vector<Coord> state_coords_;
  std::vector<int> state_index_;  // row-major cell -> state id, -1 for walls
  int start_state_ = 0;
};

}  // namespace tsrlab
