#include "tabular.hpp"

#include "error.hpp"

namespace tsrlab {

int argmax_first(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptyInput, "argmax over empty value list");
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[static_cast<size_t>(i)] > values[static_cast<size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

int argmax_last(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptyInput, "argmax over empty value list");
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[static_cast<size_t>(i)] >= values[static_cast<size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

int epsilon_greedy(Rng& rng, std::span<const double> values, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidEpsilon,
                "epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
  if (values.empty()) {
    throw Error(ErrorCode::EmptyInput, "selection over empty value list");
  }
  if (rng.uniform() < epsilon) {
    return rng.uniform_int(static_cast<int>(values.size()));
  }
  return argmax_first(values);
}

double total_variation(const GreedyPolicy& a, const GreedyPolicy& b) {
  if (a.choices.size() != b.choices.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "policies cover different numbers of states: " +
                    std::to_string(a.choices.size()) + " vs " +
                    std::to_string(b.choices.size()));
  }
  if (a.choices.empty()) {
    return 0.0;
  }
  int changed = 0;
  for (size_t s = 0; s < a.choices.size(); ++s) {
    if (!(a.choices[s] == b.choices[s])) {
      ++changed;
    }
  }
  return static_cast<double>(changed) / static_cast<double>(a.choices.size());
}

QTable make_q_table(int num_states, int num_actions) {
  if (num_states < 1 || num_actions < 1) {
    throw Error(ErrorCode::InvalidArgument, "table dimensions must be positive");
  }
  return QTable::Zero(num_states, num_actions);
}

SkipQTable SkipQTable::zeros(int num_states, int num_actions, int j_max) {
  if (num_states < 1 || num_actions < 1 || j_max < 1) {
    throw Error(ErrorCode::InvalidArgument, "table dimensions must be positive");
  }
  SkipQTable table;
  table.values.reserve(static_cast<size_t>(num_actions));
  for (int a = 0; a < num_actions; ++a) {
    table.values.push_back(MatrixRM::Zero(num_states, j_max));
  }
  return table;
}

}  // namespace tsrlab
