#include "grid.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace tsrlab {

namespace {

const char* kActionNames[kNumActions] = {"north", "east", "south", "west"};

CellKind cell_from_char(char c, int row, int col) {
  switch (c) {
    case '#':
      return CellKind::Wall;
    case '.':
      return CellKind::Floor;
    case 'L':
      return CellKind::Lava;
    case 'G':
      return CellKind::GoalCandidate;
    case 'S':
      return CellKind::Start;
    default:
      throw Error(ErrorCode::UnknownCharacter,
                  "unknown map character '" + std::string(1, c) + "' at row " +
                      std::to_string(row) + ", col " + std::to_string(col));
  }
}

}  // namespace

const char* action_name(int action) {
  if (action < 0 || action >= kNumActions) {
    throw Error(ErrorCode::InvalidAction,
                "action index out of range: " + std::to_string(action));
  }
  return kActionNames[action];
}

int action_from_name(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (int a = 0; a < kNumActions; ++a) {
    if (lower == kActionNames[a]) {
      return a;
    }
  }
  throw Error(ErrorCode::InvalidAction, "unknown action name: " + name);
}

GridLayout GridLayout::parse(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  if (lines.empty()) {
    throw Error(ErrorCode::EmptyInput, "layout text is empty");
  }

  GridLayout layout;
  layout.height_ = static_cast<int>(lines.size());
  layout.width_ = static_cast<int>(lines[0].size());
  for (int r = 0; r < layout.height_; ++r) {
    if (static_cast<int>(lines[r].size()) != layout.width_) {
      throw Error(ErrorCode::NonRectangular,
                  "row " + std::to_string(r) + " has length " +
                      std::to_string(lines[r].size()) + ", expected " +
                      std::to_string(layout.width_));
    }
  }

  layout.cells_.reserve(static_cast<size_t>(layout.width_) * layout.height_);
  int start_count = 0;
  for (int r = 0; r < layout.height_; ++r) {
    for (int c = 0; c < layout.width_; ++c) {
      CellKind kind = cell_from_char(lines[r][c], r, c);
      layout.cells_.push_back(kind);
      if (kind == CellKind::Start) {
        layout.start_ = {r, c};
        ++start_count;
      } else if (kind == CellKind::GoalCandidate) {
        layout.goals_.push_back({r, c});
      }
    }
  }
  if (start_count != 1) {
    throw Error(ErrorCode::WrongStartCount,
                "layout must contain exactly one 'S', found " +
                    std::to_string(start_count));
  }
  if (layout.goals_.size() != 2) {
    throw Error(ErrorCode::WrongGoalCount,
                "layout must contain exactly two 'G's, found " +
                    std::to_string(layout.goals_.size()));
  }
  return layout;
}

GridLayout GridLayout::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open layout file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

CellKind GridLayout::cell(int row, int col) const {
  if (!in_bounds(row, col)) {
    throw Error(ErrorCode::IndexOutOfRange,
                "cell (" + std::to_string(row) + ", " + std::to_string(col) +
                    ") outside " + std::to_string(height_) + "x" +
                    std::to_string(width_) + " layout");
  }
  return cells_[static_cast<size_t>(row) * width_ + col];
}

std::vector<Coord> GridLayout::unreachable_cells() const {
  std::vector<char> reached(cells_.size(), 0);
  std::deque<Coord> frontier;
  reached[static_cast<size_t>(start_.row) * width_ + start_.col] = 1;
  frontier.push_back(start_);
  while (!frontier.empty()) {
    Coord cur = frontier.front();
    frontier.pop_front();
    CellKind kind = cell(cur.row, cur.col);
    // Lava ends the episode on entry, so nothing beyond it is explored.
    if (kind == CellKind::Lava) {
      continue;
    }
    for (int a = 0; a < kNumActions; ++a) {
      int nr = cur.row + kRowDelta[a];
      int nc = cur.col + kColDelta[a];
      if (!in_bounds(nr, nc) || cell(nr, nc) == CellKind::Wall) {
        continue;
      }
      size_t idx = static_cast<size_t>(nr) * width_ + nc;
      if (!reached[idx]) {
        reached[idx] = 1;
        frontier.push_back({nr, nc});
      }
    }
  }

  std::vector<Coord> unreachable;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      size_t idx = static_cast<size_t>(r) * width_ + c;
      if (cells_[idx] != CellKind::Wall && !reached[idx]) {
        unreachable.push_back({r, c});
      }
    }
  }
  return unreachable;
}

Gridworld::Gridworld(GridLayout layout, int active_goal, int step_cap)
    : layout_(std::move(layout)), active_goal_(active_goal),
      step_cap_(step_cap) {
  if (active_goal != 0 && active_goal != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "active goal must be 0 or 1, got " +
                    std::to_string(active_goal));
  }
  if (step_cap < 1) {
    throw Error(ErrorCode::InvalidArgument, "step cap must be positive");
  }
  state_index_.assign(
      static_cast<size_t>(layout_.width()) * layout_.height(), -1);
  for (int r = 0; r < layout_.height(); ++r) {
    for (int c = 0; c < layout_.width(); ++c) {
      if (layout_.cell(r, c) == CellKind::Wall) {
        continue;
      }
      state_index_[static_cast<size_t>(r) * layout_.width() + c] =
          static_cast<int>(state_coords_.size());
      state_coords_.push_back({r, c});
    }
  }
  start_state_ = state_at(layout_.start());
}

void Gridworld::set_active_goal(int goal) {
  if (goal != 0 && goal != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "active goal must be 0 or 1, got " + std::to_string(goal));
  }
  active_goal_ = goal;
}

Coord Gridworld::coord_of(int state) const {
  if (state < 0 || state >= num_states()) {
    throw Error(ErrorCode::InvalidState,
                "state id out of range: " + std::to_string(state));
  }
  return state_coords_[static_cast<size_t>(state)];
}

int Gridworld::state_at(Coord c) const {
  if (!layout_.in_bounds(c.row, c.col)) {
    return -1;
  }
  return state_index_[static_cast<size_t>(c.row) * layout_.width() + c.col];
}

bool Gridworld::is_terminal(int state) const {
  Coord c = coord_of(state);
  CellKind kind = layout_.cell(c.row, c.col);
  if (kind == CellKind::Lava) {
    return true;
  }
  if (kind == CellKind::GoalCandidate) {
    return layout_.goal_candidates()[static_cast<size_t>(active_goal_)] == c;
  }
  return false;
}

StepOutcome Gridworld::step(int state, int action) const {
  if (is_terminal(state)) {
    throw Error(ErrorCode::InvalidState,
                "cannot step from terminal state " + std::to_string(state));
  }
  if (action < 0 || action >= kNumActions) {
    throw Error(ErrorCode::InvalidAction,
                "action index out of range: " + std::to_string(action));
  }
  Coord cur = coord_of(state);
  Coord tgt{cur.row + kRowDelta[action], cur.col + kColDelta[action]};
  int next = state_at(tgt);
  if (next < 0) {
    // Bumping a wall or the grid edge keeps the agent in place.
    return {state, 0.0, false, false};
  }
  CellKind kind = layout_.cell(tgt.row, tgt.col);
  if (kind == CellKind::Lava) {
    return {next, -1.0, true, false};
  }
  if (kind == CellKind::GoalCandidate &&
      layout_.goal_candidates()[static_cast<size_t>(active_goal_)] == tgt) {
    return {next, 1.0, true, false};
  }
  return {next, 0.0, false, false};
}

std::vector<TransitionRecord> Gridworld::execute_repeat(
    int state, int action, int repeat, int steps_so_far) const {
  if (repeat < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "repeat count must be at least 1, got " +
                    std::to_string(repeat));
  }
  std::vector<TransitionRecord> trace;
  trace.reserve(static_cast<size_t>(repeat));
  int cur = state;
  for (int i = 0; i < repeat; ++i) {
    TransitionRecord rec;
    rec.state = cur;
    rec.action = action;
    rec.outcome = step(cur, action);
    ++steps_so_far;
    if (!rec.outcome.terminal && steps_so_far >= step_cap_) {
      rec.outcome.truncated = true;
    }
    trace.push_back(rec);
    if (rec.outcome.terminal || rec.outcome.truncated) {
      break;
    }
    cur = rec.outcome.next_state;
  }
  return trace;
}

TabularDynamics Gridworld::export_dynamics() const {
  const int n = num_states();
  TabularDynamics dyn;
  dyn.reward = Eigen::MatrixXd::Zero(n, kNumActions);
  for (int a = 0; a < kNumActions; ++a) {
    dyn.transition.push_back(Eigen::MatrixXd::Zero(n, n));
  }
  for (int s = 0; s < n; ++s) {
    if (is_terminal(s)) {
      // Absorbing: every action self-loops with zero reward.
      for (int a = 0; a < kNumActions; ++a) {
        dyn.transition[static_cast<size_t>(a)](s, s) = 1.0;
      }
      continue;
    }
    for (int a = 0; a < kNumActions; ++a) {
      StepOutcome out = step(s, a);
      dyn.transition[static_cast<size_t>(a)](s, out.next_state) = 1.0;
      dyn.reward(s, a) = out.reward;
    }
  }
  return dyn;
}

}  // namespace tsrlab
