#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "rng.hpp"

namespace tsrlab {

// One decision of a temporally extended policy: which action to take and how
// many times to repeat it before deciding again. Plain one-step agents always
// use repeat == 1.
struct Decision {
  int action = 0;
  int repeat = 1;

  bool operator==(const Decision&) const = default;
};

// Index of the largest value; ties go to the smallest index so that greedy
// behavior is deterministic and evaluation needs no random draws.
int argmax_first(std::span<const double> values);

// Largest index attaining the maximum. Used for the repeat dimension, where
// equal-value commitments should resolve to the longest one (fewer policy
// queries for the same return).
int argmax_last(std::span<const double> values);

// With probability epsilon picks a uniform index, otherwise argmax_first.
// Always consumes the exploration coin flip, so the draw sequence depends
// only on how often this is called, not on the values.
int epsilon_greedy(Rng& rng, std::span<const double> values, double epsilon);

// Greedy decision for every state, terminal states included (their rows are
// never updated, so they contribute nothing when policies are compared).
struct GreedyPolicy {
  std::vector<Decision> choices;

  bool operator==(const GreedyPolicy&) const = default;
};

// Fraction of states whose greedy decision differs between the two policies.
// For deterministic policies this equals the mean per-state total variation
// distance between the (one-hot) decision distributions.
double total_variation(const GreedyPolicy& a, const GreedyPolicy& b);

// Row-major storage so that the per-state rows handed to the selection
// helpers are contiguous.
using MatrixRM =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// All value tables start at zero and are indexed (state, action) or, for the
// skip table, [action](state, repeat-1).
using QTable = MatrixRM;

QTable make_q_table(int num_states, int num_actions);

struct SkipQTable {
  std::vector<MatrixRM> values;  // per action: states x j_max

  static SkipQTable zeros(int num_states, int num_actions, int j_max);
  int j_max() const {
    return values.empty() ? 0 : static_cast<int>(values[0].cols());
  }
};

}  // namespace tsrlab
