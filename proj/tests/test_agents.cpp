#include "agents.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "experiment.hpp"
#include "grid.hpp"
#include "rng.hpp"
#include "sr_analytic.hpp"
#include "tabular.hpp"

namespace tsrlab {
namespace {

std::string layout_path(const char* name) {
  return std::string(TSRLAB_LAYOUT_DIR) + "/" + name;
}

TransitionRecord rec(int state, int action, int next_state, double reward,
                     bool terminal = false) {
  return {state, action, {next_state, reward, terminal, false}};
}

double max_abs_diff(const MatrixRM& a, const MatrixRM& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

TEST(AgentConfigTest, DefaultsAreValid) {
  EXPECT_NO_THROW(AgentConfig{}.validate());
}

TEST(AgentConfigTest, RejectsOutOfRangeLearningRates) {
  for (double bad : {0.0, -0.1, 1.5}) {
    AgentConfig cfg;
    cfg.alpha = bad;
    try {
      cfg.validate();
      FAIL() << "alpha " << bad << " should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
    cfg = AgentConfig{};
    cfg.alpha_r = bad;
    EXPECT_THROW(cfg.validate(), Error);
  }
  AgentConfig full;
  full.alpha = 1.0;
  full.alpha_r = 1.0;
  EXPECT_NO_THROW(full.validate());
}

TEST(AgentConfigTest, RejectsOutOfRangeGamma) {
  for (double bad : {1.0, 1.2, -0.01}) {
    AgentConfig cfg;
    cfg.gamma = bad;
    try {
      cfg.validate();
      FAIL() << "gamma " << bad << " should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
  }
  AgentConfig zero;
  zero.gamma = 0.0;
  EXPECT_NO_THROW(zero.validate());
}

TEST(AgentConfigTest, RejectsOutOfRangeEpsilon) {
  for (double bad : {-0.01, 1.01}) {
    AgentConfig cfg;
    cfg.epsilon = bad;
    try {
      cfg.validate();
      FAIL() << "epsilon " << bad << " should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidEpsilon);
    }
  }
  AgentConfig edge;
  edge.epsilon = 0.0;
  EXPECT_NO_THROW(edge.validate());
  edge.epsilon = 1.0;
  EXPECT_NO_THROW(edge.validate());
}

TEST(AgentConfigTest, RejectsNonPositiveRepeatBudget) {
  AgentConfig cfg;
  cfg.j_max = 0;
  try {
    cfg.validate();
    FAIL() << "j_max 0 should be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  cfg.j_max = 1;
  EXPECT_NO_THROW(cfg.validate());
}

TEST(SrTensorTest, FactoriesProduceZeroedTables) {
  SrTensor m = make_sr_tensor(5, 3);
  ASSERT_EQ(m.size(), 3u);
  for (const auto& mat : m) {
    EXPECT_EQ(mat.rows(), 5);
    EXPECT_EQ(mat.cols(), 5);
    EXPECT_EQ(mat.cwiseAbs().maxCoeff(), 0.0);
  }
  SrTensor4 m4 = make_sr_tensor4(4, 2, 7);
  ASSERT_EQ(m4.size(), 2u);
  for (const auto& per_action : m4) {
    ASSERT_EQ(per_action.size(), 7u);
    for (const auto& mat : per_action) {
      EXPECT_EQ(mat.rows(), 4);
      EXPECT_EQ(mat.cols(), 4);
      EXPECT_EQ(mat.cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(SrTensorTest, FactoriesRejectNonPositiveDimensions) {
  for (auto [states, actions] : {std::pair{0, 4}, std::pair{5, 0}}) {
    try {
      make_sr_tensor(states, actions);
      FAIL() << "dimensions " << states << "x" << actions
             << " should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
  }
  EXPECT_THROW(make_sr_tensor4(5, 4, 0), Error);
  EXPECT_THROW(make_sr_tensor4(0, 4, 3), Error);
}

TEST(QUpdateTest, TerminalTargetIsTheRewardAlone) {
  QTable q = make_q_table(4, 4);
  q_update(q, 0, 1, 1.0, 2, true, 1.0, 0.99);
  EXPECT_DOUBLE_EQ(q(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(q.cwiseAbs().sum(), 1.0);
}

TEST(QUpdateTest, BootstrapsFromTheSuccessorsBestValue) {
  QTable q = make_q_table(4, 4);
  q(0, 1) = 1.0;
  q(0, 2) = -3.0;
  q_update(q, 3, 0, 0.0, 0, false, 1.0, 0.99);
  EXPECT_DOUBLE_EQ(q(3, 0), 0.99);
}

TEST(QUpdateTest, AlphaBlendsOldAndNewEstimates) {
  QTable q = make_q_table(2, 2);
  q(0, 1) = 1.0;
  q_update(q, 0, 1, 0.0, 1, true, 0.5, 0.99);
  EXPECT_DOUBLE_EQ(q(0, 1), 0.5);
}

TEST(QUpdateTest, ValidatesItsInputs) {
  QTable q = make_q_table(3, 4);
  for (auto bad : {+[](QTable& t) { q_update(t, 3, 0, 0.0, 0, false, 1, 0.9); },
                   +[](QTable& t) { q_update(t, 0, 0, 0.0, -1, false, 1, 0.9); },
                   +[](QTable& t) { q_update(t, 0, 4, 0.0, 0, false, 1, 0.9); }}) {
    try {
      bad(q);
      FAIL() << "out-of-range index should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
  }
  EXPECT_EQ(q.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SkipQUpdateTest, SingleStepTraceMatchesTheOneStepRule) {
  QTable reference = make_q_table(3, 4);
  reference(2, 0) = 2.0;
  QTable companion = reference;
  SkipQTable sq = SkipQTable::zeros(3, 4, 3);
  q_update(reference, 0, 1, 0.25, 2, false, 1.0, 0.5);

  skip_q_update(sq, companion, {rec(0, 1, 2, 0.25)}, 1, 1.0, 0.5);
  EXPECT_EQ(companion, reference);
  EXPECT_DOUBLE_EQ(sq.values[1](0, 0), reference(0, 1));
}

TEST(SkipQUpdateTest, SlotLearnsTheDiscountedReturnOfTheBurst) {
  SkipQTable sq = SkipQTable::zeros(3, 4, 3);
  QTable q = make_q_table(3, 4);
  RepeatTrace trace{rec(0, 2, 1, -0.25), rec(1, 2, 2, 1.0, true)};
  skip_q_update(sq, q, trace, 2, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(sq.values[2](0, 1), -0.25 + 0.5 * 1.0);
  EXPECT_DOUBLE_EQ(q(0, 2), -0.25);
  EXPECT_DOUBLE_EQ(q(1, 2), 1.0);
}

TEST(SkipQUpdateTest, BootstrapsFromTheCompanionTableAtTheEndState) {
  SkipQTable sq = SkipQTable::zeros(3, 4, 3);
  QTable q = make_q_table(3, 4);
  q(2, 0) = 2.0;
  // The requested repeat keeps its own slot even when the executed burst was
  // cut short, exactly as truncated bursts arrive from the environment.
  skip_q_update(sq, q, {rec(0, 1, 2, 0.25)}, 3, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(sq.values[1](0, 2), 0.25 + 0.5 * 2.0);
  EXPECT_EQ(sq.values[1](0, 0), 0.0);
  EXPECT_EQ(sq.values[1](0, 1), 0.0);
  EXPECT_DOUBLE_EQ(q(0, 1), 1.25);
  EXPECT_DOUBLE_EQ(q(2, 0), 2.0);
}

TEST(SkipQUpdateTest, CompanionUpdatesRunInTraceOrder) {
  SkipQTable sq = SkipQTable::zeros(3, 2, 3);
  QTable q = make_q_table(3, 2);
  RepeatTrace trace{rec(0, 1, 1, 1.0), rec(1, 1, 0, 0.0)};
  skip_q_update(sq, q, trace, 2, 1.0, 0.5);
  // The slot bootstraps from the companion table as it stood on entry (all
  // zero), while the second companion update already sees the first one.
  EXPECT_DOUBLE_EQ(sq.values[1](0, 1), 1.0);
  EXPECT_DOUBLE_EQ(q(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(q(1, 1), 0.5);
}

TEST(SkipQUpdateTest, ValidatesItsInputs) {
  SkipQTable sq = SkipQTable::zeros(3, 4, 3);
  QTable q = make_q_table(3, 4);
  try {
    skip_q_update(sq, q, {}, 1, 1.0, 0.5);
    FAIL() << "empty trace should be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTrace);
  }
  for (int bad_j : {0, 4}) {
    try {
      skip_q_update(sq, q, {rec(0, 1, 2, 0.0)}, bad_j, 1.0, 0.5);
      FAIL() << "repeat " << bad_j << " should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
  }
  // A malformed record anywhere in the trace is rejected before any table
  // moves.
  RepeatTrace bad_tail{rec(0, 1, 2, 0.0), rec(2, 1, 99, 0.0)};
  EXPECT_THROW(skip_q_update(sq, q, bad_tail, 2, 1.0, 0.5), Error);
  EXPECT_THROW(skip_q_update(sq, q, {rec(0, 7, 2, 0.0)}, 1, 1.0, 0.5), Error);
  EXPECT_EQ(q.cwiseAbs().maxCoeff(), 0.0);
  for (const auto& per_action : sq.values) {
    EXPECT_EQ(per_action.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(SrRowUpdateTest, TerminalTargetKeepsSelfPlusDiscountedEndState) {
  SrTensor m = make_sr_tensor(3, 2);
  sr_td_row_update(m, 0, 0, 1, 0, true, 1.0, 0.99);
  EXPECT_DOUBLE_EQ(m[0](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m[0](0, 1), 0.99);
  EXPECT_DOUBLE_EQ(m[0](0, 2), 0.0);
}

TEST(SrRowUpdateTest, BootstrapsFromTheChosenActionsRow) {
  SrTensor m = make_sr_tensor(3, 2);
  m[1].row(2) << 0.5, 0.0, 2.0;
  sr_td_row_update(m, 0, 0, 2, 1, false, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(m[0](0, 0), 1.25);
  EXPECT_DOUBLE_EQ(m[0](0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m[0](0, 2), 1.0);
}

TEST(SrRowUpdateTest, TerminalSelfLoopAccumulatesBothContributions) {
  SrTensor m = make_sr_tensor(3, 2);
  sr_td_row_update(m, 2, 1, 2, 0, true, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(m[1](2, 2), 1.5);
}

TEST(SrRowUpdateTest, AlphaMovesTheRowPartWay) {
  SrTensor m = make_sr_tensor(3, 1);
  m[0].row(0) << 1.0, 1.0, 1.0;
  sr_td_row_update(m, 0, 0, 0, 0, true, 0.5, 0.5);
  EXPECT_DOUBLE_EQ(m[0](0, 0), 1.25);
  EXPECT_DOUBLE_EQ(m[0](0, 1), 0.5);
  EXPECT_DOUBLE_EQ(m[0](0, 2), 0.5);
}

TEST(SrRowUpdateTest, ValidatesItsInputs) {
  SrTensor m = make_sr_tensor(3, 2);
  for (auto bad :
       {+[](SrTensor& t) { sr_td_row_update(t, 3, 0, 0, 0, true, 1, 0.9); },
        +[](SrTensor& t) { sr_td_row_update(t, 0, 2, 0, 0, true, 1, 0.9); },
        +[](SrTensor& t) { sr_td_row_update(t, 0, 0, -1, 0, true, 1, 0.9); },
        +[](SrTensor& t) { sr_td_row_update(t, 0, 0, 0, 5, true, 1, 0.9); }}) {
    try {
      bad(m);
      FAIL() << "out-of-range index should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
  }
}

TEST(SrUpdateTest, LearnsArrivalRewardsAndOccupancyTogether) {
  SrTensor m = make_sr_tensor(3, 2);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  AgentConfig cfg;
  sr_update(m, w, 0, 1, 0.75, 2, true, cfg);
  EXPECT_DOUBLE_EQ(m[1](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m[1](0, 2), cfg.gamma);
  EXPECT_DOUBLE_EQ(w(2), 0.75);
  EXPECT_DOUBLE_EQ(w(0) + w(1), 0.0);
}

TEST(SrUpdateTest, ChoosesTheBootstrapActionBeforeAnyTablesMove) {
  SrTensor m = make_sr_tensor(3, 2);
  m[0](1, 1) = 1.0;  // action 0's row at the successor points at state 1
  m[1](1, 2) = 1.0;  // action 1's row at the successor points at state 2
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  w(2) = 1.0;
  AgentConfig cfg;
  cfg.gamma = 0.5;
  // Arriving reward 5 at state 1 would flip the greedy action there if the
  // reward vector were updated first; the bootstrap must use action 1.
  sr_update(m, w, 0, 0, 5.0, 1, false, cfg);
  EXPECT_DOUBLE_EQ(m[0](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m[0](0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m[0](0, 2), 0.5);
  EXPECT_DOUBLE_EQ(w(1), 5.0);
}

TEST(SrUpdateTest, RewardVectorMovesByItsOwnRate) {
  SrTensor m = make_sr_tensor(3, 2);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  w(2) = 1.0;
  AgentConfig cfg;
  cfg.alpha_r = 0.25;
  sr_update(m, w, 0, 0, 0.0, 2, true, cfg);
  EXPECT_DOUBLE_EQ(w(2), 0.75);
}

TEST(SrUpdateTest, OccupanciesStayOnTheDiscountHorizon) {
  Gridworld env(GridLayout::load(layout_path("junction.txt")), 0, 200);
  const int n = env.num_states();
  AgentConfig cfg;
  SrTensor m = make_sr_tensor(n, kNumActions);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Rng rng(29);
  for (int episode = 0; episode < 200; ++episode) {
    int state = env.start_state();
    for (int step = 0; step < 200; ++step) {
      int action = rng.uniform_int(kNumActions);
      StepOutcome out = env.step(state, action);
      sr_update(m, w, state, action, out.reward, out.next_state, out.terminal,
                cfg);
      if (out.terminal) {
        break;
      }
      state = out.next_state;
    }
  }
  const double horizon = 1.0 / (1.0 - cfg.gamma);
  bool touched = false;
  for (const auto& mat : m) {
    touched = touched || mat.cwiseAbs().maxCoeff() > 0.0;
    EXPECT_GE(mat.minCoeff(), 0.0);
    EXPECT_LE(mat.maxCoeff(), horizon + 1e-9);
    EXPECT_LE(mat.rowwise().sum().maxCoeff(), horizon + 1e-9);
  }
  EXPECT_TRUE(touched);
}

TEST(TsrUpdateTest, TerminalBurstLaysDownDiscountedOccupancies) {
  SrTensor4 m = make_sr_tensor4(3, 2, 3);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  AgentConfig cfg;
  cfg.gamma = 0.5;
  RepeatTrace trace{rec(0, 0, 1, 0.0), rec(1, 0, 2, 1.0, true)};
  tsr_update(m, w, trace, 2, cfg);
  EXPECT_DOUBLE_EQ(m[0][1](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m[0][1](0, 1), 0.5);
  EXPECT_DOUBLE_EQ(m[0][1](0, 2), 0.25);
  EXPECT_DOUBLE_EQ(w(1), 0.0);
  EXPECT_DOUBLE_EQ(w(2), 1.0);
}

TEST(TsrUpdateTest, RevisitsAccumulateOccupancy) {
  SrTensor4 m = make_sr_tensor4(3, 2, 3);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  AgentConfig cfg;
  cfg.gamma = 0.5;
  RepeatTrace trace{rec(0, 0, 1, 0.0), rec(1, 0, 0, 0.0),
                    rec(0, 0, 1, 0.0, true)};
  tsr_update(m, w, trace, 3, cfg);
  EXPECT_DOUBLE_EQ(m[0][2](0, 0), 1.0 + 0.25);
  EXPECT_DOUBLE_EQ(m[0][2](0, 1), 0.5 + 0.125);
  EXPECT_DOUBLE_EQ(m[0][2](0, 2), 0.0);
}

TEST(TsrUpdateTest, BootstrapsFromTheJointlyGreedyRow) {
  SrTensor4 m = make_sr_tensor4(3, 2, 2);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  w(2) = 1.0;
  // Both repeats of action 0 are worth 2.0 at the end state; the bootstrap
  // must take the longer commitment's row, whose composition differs.
  m[0][0].row(2) << 2.0, 0.0, 2.0;
  m[0][1].row(2) << 0.0, 0.0, 2.0;
  AgentConfig cfg;
  cfg.gamma = 0.5;
  tsr_update(m, w, {rec(0, 1, 2, 0.0)}, 1, cfg);
  EXPECT_DOUBLE_EQ(m[1][0](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m[1][0](0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m[1][0](0, 2), 1.0);
}

TEST(TsrUpdateTest, RequestedSlotIsUpdatedEvenWhenTheBurstEndsEarly) {
  SrTensor4 m = make_sr_tensor4(3, 2, 3);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  AgentConfig cfg;
  cfg.gamma = 0.5;
  tsr_update(m, w, {rec(0, 0, 2, 1.0, true)}, 3, cfg);
  EXPECT_DOUBLE_EQ(m[0][2](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m[0][2](0, 2), 0.5);
  EXPECT_EQ(m[0][0].cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m[0][1].cwiseAbs().maxCoeff(), 0.0);
}

TEST(TsrUpdateTest, RewardVectorTracksEveryPrimitiveTransition) {
  SrTensor4 m = make_sr_tensor4(3, 2, 3);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  AgentConfig cfg;
  RepeatTrace trace{rec(0, 0, 1, 0.25), rec(1, 0, 1, 0.75)};
  tsr_update(m, w, trace, 2, cfg);
  EXPECT_DOUBLE_EQ(w(1), 0.75);  // later arrivals overwrite at full rate
  Eigen::VectorXd w_partial = Eigen::VectorXd::Zero(3);
  SrTensor4 m_partial = make_sr_tensor4(3, 2, 3);
  cfg.alpha_r = 0.5;
  tsr_update(m_partial, w_partial, trace, 2, cfg);
  EXPECT_DOUBLE_EQ(w_partial(1), 0.125 + 0.5 * (0.75 - 0.125));
}

TEST(TsrUpdateTest, SingleStepTraceReducesToTheOneStepRule) {
  const int n = 5;
  SrTensor one_step = make_sr_tensor(n, 2);
  SrTensor4 repeated = make_sr_tensor4(n, 2, 1);
  Rng rng(11);
  for (size_t a = 0; a < 2; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = rng.uniform();
        one_step[a](i, j) = v;
        repeated[a][0](i, j) = v;
      }
    }
  }
  Eigen::VectorXd w_sr(n), w_tsr(n);
  for (int i = 0; i < n; ++i) {
    w_sr(i) = rng.uniform();
  }
  w_tsr = w_sr;

  AgentConfig cfg;
  cfg.alpha = 0.5;
  cfg.alpha_r = 0.5;
  cfg.gamma = 0.9;
  cfg.j_max = 1;
  sr_update(one_step, w_sr, 3, 1, 0.7, 2, false, cfg);
  tsr_update(repeated, w_tsr, {rec(3, 1, 2, 0.7)}, 1, cfg);

  for (size_t a = 0; a < 2; ++a) {
    EXPECT_EQ(max_abs_diff(repeated[a][0], one_step[a]), 0.0);
  }
  EXPECT_EQ((w_tsr - w_sr).cwiseAbs().maxCoeff(), 0.0);
}

TEST(TsrUpdateTest, OccupanciesStayOnTheDiscountHorizon) {
  Gridworld env(GridLayout::load(layout_path("junction.txt")), 0, 200);
  const int n = env.num_states();
  AgentConfig cfg;
  SrTensor4 m = make_sr_tensor4(n, kNumActions, cfg.j_max);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Rng rng(31);
  for (int episode = 0; episode < 150; ++episode) {
    int state = env.start_state();
    int steps = 0;
    while (true) {
      int action = rng.uniform_int(kNumActions);
      int repeat = 1 + rng.uniform_int(cfg.j_max);
      auto trace = env.execute_repeat(state, action, repeat, steps);
      tsr_update(m, w, trace, repeat, cfg);
      steps += static_cast<int>(trace.size());
      const StepOutcome& last = trace.back().outcome;
      if (last.terminal || last.truncated) {
        break;
      }
      state = last.next_state;
    }
  }
  const double horizon = 1.0 / (1.0 - cfg.gamma);
  bool touched = false;
  for (const auto& per_action : m) {
    for (const auto& mat : per_action) {
      touched = touched || mat.cwiseAbs().maxCoeff() > 0.0;
      EXPECT_GE(mat.minCoeff(), 0.0);
      EXPECT_LE(mat.maxCoeff(), horizon + 1e-9);
      EXPECT_LE(mat.rowwise().sum().maxCoeff(), horizon + 1e-9);
    }
  }
  EXPECT_TRUE(touched);
}

TEST(TsrUpdateTest, ValidatesItsInputs) {
  SrTensor4 m = make_sr_tensor4(3, 2, 2);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  AgentConfig cfg;
  try {
    tsr_update(m, w, {}, 1, cfg);
    FAIL() << "empty trace should be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTrace);
  }
  for (int bad_j : {0, 3}) {
    try {
      tsr_update(m, w, {rec(0, 0, 1, 0.0)}, bad_j, cfg);
      FAIL() << "repeat " << bad_j << " should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
  }
  EXPECT_THROW(tsr_update(m, w, {rec(0, 5, 1, 0.0)}, 1, cfg), Error);
  RepeatTrace bad_tail{rec(0, 0, 1, 0.0), rec(1, 0, 99, 0.0)};
  EXPECT_THROW(tsr_update(m, w, bad_tail, 2, cfg), Error);
  for (const auto& per_action : m) {
    for (const auto& mat : per_action) {
      EXPECT_EQ(mat.cwiseAbs().maxCoeff(), 0.0);
    }
  }
  EXPECT_EQ(w.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ValueComputationTest, ZeroRewardsGiveZeroValues) {
  SrTensor m = make_sr_tensor(3, 4);
  m[2](1, 1) = 5.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  EXPECT_EQ(sr_q_values(m, w, 1).cwiseAbs().maxCoeff(), 0.0);
  SrTensor4 m4 = make_sr_tensor4(3, 4, 2);
  EXPECT_EQ(tsr_q_values(m4, w, 0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ValueComputationTest, IdentityOccupancyReadsTheRewardAtTheState) {
  SrTensor m = make_sr_tensor(3, 2);
  m[0].setIdentity();
  m[1].setIdentity();
  Eigen::VectorXd w(3);
  w << 0.5, -1.0, 2.0;
  for (int s = 0; s < 3; ++s) {
    Eigen::VectorXd values = sr_q_values(m, w, s);
    ASSERT_EQ(values.size(), 2);
    EXPECT_DOUBLE_EQ(values(0), w(s));
    EXPECT_DOUBLE_EQ(values(1), w(s));
  }
}

TEST(ValueComputationTest, RepeatValuesFillTheActionByRepeatGrid) {
  SrTensor4 m = make_sr_tensor4(3, 2, 3);
  for (size_t a = 0; a < 2; ++a) {
    for (size_t j = 0; j < 3; ++j) {
      m[a][j].setIdentity();
      m[a][j] *= static_cast<double>(10 * (a + 1) + (j + 1));
    }
  }
  Eigen::VectorXd w(3);
  w << 0.0, 1.0, 0.0;
  Eigen::MatrixXd values = tsr_q_values(m, w, 1);
  ASSERT_EQ(values.rows(), 2);
  ASSERT_EQ(values.cols(), 3);
  for (int a = 0; a < 2; ++a) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_DOUBLE_EQ(values(a, j), 10.0 * (a + 1) + (j + 1));
    }
  }
}

TEST(ValueComputationTest, ValidatesShapes) {
  SrTensor m = make_sr_tensor(3, 2);
  Eigen::VectorXd wrong = Eigen::VectorXd::Zero(4);
  try {
    sr_q_values(m, wrong, 0);
    FAIL() << "mismatched reward vector should be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  EXPECT_THROW(sr_q_values(SrTensor{}, wrong, 0), Error);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  try {
    sr_q_values(m, w, 3);
    FAIL() << "state out of range should be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
  SrTensor4 m4 = make_sr_tensor4(3, 2, 2);
  EXPECT_THROW(tsr_q_values(m4, wrong, 0), Error);
  EXPECT_THROW(tsr_q_values(m4, w, -1), Error);
}

TEST(TsrSelectionTest, BlankTablesCommitToTheLongestRepeat) {
  SrTensor4 m = make_sr_tensor4(3, 4, 3);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  EXPECT_EQ(tsr_greedy_pair(m, w, 1), (Decision{0, 3}));
  Rng rng(5);
  EXPECT_EQ(tsr_select(m, w, 1, 0.0, rng), (Decision{0, 3}));
}

TEST(TsrSelectionTest, UniqueMaximumWinsOutright) {
  SrTensor4 m = make_sr_tensor4(3, 2, 3);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  w(2) = 1.0;
  m[1][0](0, 2) = 4.0;
  EXPECT_EQ(tsr_greedy_pair(m, w, 0), (Decision{1, 1}));
}

TEST(TsrSelectionTest, ExplorationPerturbsTheActionButNotTheRepeat) {
  SrTensor4 m = make_sr_tensor4(1, 2, 2);
  Eigen::VectorXd w(1);
  w << 1.0;
  m[0][0](0, 0) = 1.0;
  m[0][1](0, 0) = 1.0;  // action 0 ties across repeats: greedy repeat is 2
  m[1][0](0, 0) = 0.5;  // action 1 peaks at repeat 1
  Rng rng(77);
  const int n = 100000;
  const double epsilon = 0.3;
  int action0 = 0;
  bool repeats_greedy = true;
  for (int i = 0; i < n; ++i) {
    Decision d = tsr_select(m, w, 0, epsilon, rng);
    if (d.action == 0) {
      ++action0;
      repeats_greedy = repeats_greedy && d.repeat == 2;
    } else {
      repeats_greedy = repeats_greedy && d.repeat == 1;
    }
  }
  EXPECT_TRUE(repeats_greedy);
  EXPECT_NEAR(static_cast<double>(action0) / n, 1.0 - epsilon / 2.0, 0.01);
}

TEST(TsrSelectionTest, SingleRepeatBudgetConsumesOnlyTheActionCoin) {
  SrTensor4 m = make_sr_tensor4(4, 4, 1);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
  Rng a(9);
  Rng b(9);
  Decision d = tsr_select(m, w, 2, 0.5, a);
  std::vector<double> zeros(4, 0.0);
  int action = epsilon_greedy(b, zeros, 0.5);
  EXPECT_EQ(d.action, action);
  EXPECT_EQ(d.repeat, 1);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

// On a corridor whose active goal lies d steps east, committing east for any
// j >= d is worth exactly gamma^d / (1 - gamma): the goal absorbs, so the
// over-commitment is free. The greedy pair must resolve that tie toward the
// longest repeat, collapsing the walk into one decision.
TEST(TsrSelectionTest, AnalyticTiesResolveToTheLongestCommitment) {
  Gridworld env(GridLayout::parse("G.S....G"), 1);
  TabularDynamics dynamics = env.export_dynamics();
  TransitionModel model;
  model.t_action = dynamics.transition;
  model.policy =
      Eigen::MatrixXd::Constant(env.num_states(), kNumActions, 0.25);

  const double gamma = 0.9;
  const int j_max = 7;
  SrTensor4 m = make_sr_tensor4(env.num_states(), kNumActions, j_max);
  for (int j = 1; j <= j_max; ++j) {
    std::vector<Eigen::MatrixXd> per_action = analytic_tsr(model, gamma, j);
    for (int a = 0; a < kNumActions; ++a) {
      m[static_cast<size_t>(a)][static_cast<size_t>(j - 1)] = per_action[a];
    }
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(env.num_states());
  w(7) = 1.0;  // arriving at the east goal pays out

  const int east = 1;
  const int start = env.start_state();
  ASSERT_EQ(start, 2);
  Eigen::MatrixXd values = tsr_q_values(m, w, start);
  const double committed_value = std::pow(gamma, 5) / (1.0 - gamma);
  for (int j = 5; j <= 7; ++j) {
    EXPECT_NEAR(values(east, j - 1), committed_value, 1e-9);
  }
  EXPECT_LT(values(east, 3), committed_value - 0.5);

  Decision raw = tsr_greedy_pair(m, w, start);
  EXPECT_EQ(raw.action, east);
  EXPECT_GE(raw.repeat, 5);
  // Snap away the last-ulp noise between the analytically equal entries so
  // the tie is exact; the greedy pair must then take the longest commitment.
  for (auto& per_action : m) {
    for (auto& mat : per_action) {
      mat = ((mat * 1e9).array().round() / 1e9).matrix();
    }
  }
  EXPECT_EQ(tsr_greedy_pair(m, w, start), (Decision{east, 7}));
}

TEST(SelectRandomSkipTest, GreedyDrawsKeepSingleSteps) {
  Rng rng(3);
  std::vector<double> values{0.0, 2.0, 1.0};
  for (int i = 0; i < 200; ++i) {
    Decision d = select_random_skip(rng, values, 0.0, 7);
    EXPECT_EQ(d.action, 1);
    EXPECT_EQ(d.repeat, 1);
  }
}

TEST(SelectRandomSkipTest, ExplorationDrawsRepeatsUniformly) {
  Rng rng(8);
  std::vector<double> values(4, 0.0);
  const int n = 140000;
  std::vector<int> repeat_counts(8, 0);
  for (int i = 0; i < n; ++i) {
    Decision d = select_random_skip(rng, values, 1.0, 7);
    ASSERT_GE(d.repeat, 1);
    ASSERT_LE(d.repeat, 7);
    ++repeat_counts[static_cast<size_t>(d.repeat)];
  }
  for (int j = 1; j <= 7; ++j) {
    EXPECT_NEAR(repeat_counts[static_cast<size_t>(j)] / static_cast<double>(n),
                1.0 / 7.0, 0.01);
  }
}

TEST(SelectRandomSkipTest, BurstProbabilityTracksEpsilon) {
  Rng rng(12);
  std::vector<double> values{1.0, 0.0};
  const int n = 100000;
  const double epsilon = 0.4;
  const int j_max = 5;
  int bursts = 0;
  for (int i = 0; i < n; ++i) {
    if (select_random_skip(rng, values, epsilon, j_max).repeat > 1) {
      ++bursts;
    }
  }
  double expected = epsilon * (j_max - 1) / static_cast<double>(j_max);
  EXPECT_NEAR(static_cast<double>(bursts) / n, expected, 0.01);
}

TEST(SelectRandomSkipTest, SingleRepeatBudgetConsumesOnlyTheActionCoin) {
  std::vector<double> values{0.5, 0.25, 0.0};
  Rng a(21);
  Rng b(21);
  Decision d = select_random_skip(a, values, 0.5, 1);
  int action = epsilon_greedy(b, values, 0.5);
  EXPECT_EQ(d.action, action);
  EXPECT_EQ(d.repeat, 1);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(AgentKindTest, NamesRoundTrip) {
  const std::vector<AgentKind> kinds{AgentKind::Q, AgentKind::SkipQ,
                                     AgentKind::Sr, AgentKind::SrRandomSkip,
                                     AgentKind::Tsr};
  const std::vector<std::string> names{"q", "skip_q", "sr", "sr_random_skip",
                                       "tsr"};
  for (size_t i = 0; i < kinds.size(); ++i) {
    EXPECT_EQ(agent_kind_name(kinds[i]), names[i]);
    EXPECT_EQ(agent_kind_from_name(names[i]), kinds[i]);
  }
}

TEST(AgentKindTest, UnknownNameListsTheOptions) {
  try {
    agent_kind_from_name("dyna");
    FAIL() << "unknown agent name should be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    EXPECT_NE(std::string(e.what()).find("sr_random_skip"), std::string::npos);
  }
}

TEST(AgentFactoryTest, ProducesTheRequestedKind) {
  AgentConfig cfg;
  for (AgentKind kind : {AgentKind::Q, AgentKind::SkipQ, AgentKind::Sr,
                         AgentKind::SrRandomSkip, AgentKind::Tsr}) {
    auto agent = make_agent(kind, 21, cfg);
    ASSERT_NE(agent, nullptr);
    EXPECT_EQ(agent->kind(), kind);
    EXPECT_EQ(agent->num_states(), 21);
  }
}

TEST(AgentFactoryTest, RejectsBadConstruction) {
  AgentConfig cfg;
  try {
    make_agent(AgentKind::Q, 0, cfg);
    FAIL() << "zero states should be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  cfg.epsilon = 2.0;
  EXPECT_THROW(make_agent(AgentKind::Tsr, 21, cfg), Error);
}

TEST(AgentPolicyCacheTest, CachedPolicyMatchesFreshGreedyEvaluation) {
  Gridworld env(GridLayout::load(layout_path("junction.txt")), 0, 200);
  AgentConfig cfg;
  for (AgentKind kind : {AgentKind::Q, AgentKind::SkipQ, AgentKind::Sr,
                         AgentKind::SrRandomSkip, AgentKind::Tsr}) {
    auto agent = make_agent(kind, env.num_states(), cfg);
    Rng rng(mix_stream(5, static_cast<std::uint64_t>(kind), 1));
    for (int episode = 0; episode < 50; ++episode) {
      train_episode(*agent, env, rng);
      if (episode % 7 != 0) {
        continue;  // interleave queries so the incremental path is exercised
      }
      const GreedyPolicy& cached = agent->greedy_policy();
      for (int s = 0; s < env.num_states(); ++s) {
        ASSERT_EQ(cached.choices[static_cast<size_t>(s)],
                  agent->select_greedy(s))
            << agent_kind_name(kind) << " state " << s << " episode "
            << episode;
      }
    }
  }
}

TEST(AgentSelectionTest, ZeroEpsilonSelectionIsGreedyEverywhere) {
  Gridworld env(GridLayout::load(layout_path("junction.txt")), 0, 200);
  AgentConfig cfg;
  cfg.epsilon = 0.0;
  for (AgentKind kind : {AgentKind::Q, AgentKind::SkipQ, AgentKind::Sr,
                         AgentKind::SrRandomSkip, AgentKind::Tsr}) {
    auto agent = make_agent(kind, env.num_states(), cfg);
    Rng rng(mix_stream(6, static_cast<std::uint64_t>(kind), 1));
    for (int episode = 0; episode < 30; ++episode) {
      train_episode(*agent, env, rng);
    }
    for (int s = 0; s < env.num_states(); ++s) {
      EXPECT_EQ(agent->select(s, rng), agent->select_greedy(s))
          << agent_kind_name(kind) << " state " << s;
    }
  }
}

TEST(AgentFingerprintTest, TracksTablesDeterministically) {
  Gridworld env(GridLayout::load(layout_path("junction.txt")), 0, 200);
  AgentConfig cfg;
  for (AgentKind kind : {AgentKind::Q, AgentKind::SkipQ, AgentKind::Sr,
                         AgentKind::SrRandomSkip, AgentKind::Tsr}) {
    auto first = make_agent(kind, env.num_states(), cfg);
    auto second = make_agent(kind, env.num_states(), cfg);
    EXPECT_EQ(first->table_fingerprint(), second->table_fingerprint());

    std::uint64_t blank = first->table_fingerprint();
    Rng rng_first(mix_stream(7, static_cast<std::uint64_t>(kind), 1));
    for (int episode = 0; episode < 20; ++episode) {
      train_episode(*first, env, rng_first);
    }
    EXPECT_NE(first->table_fingerprint(), blank) << agent_kind_name(kind);

    Rng rng_second(mix_stream(7, static_cast<std::uint64_t>(kind), 1));
    for (int episode = 0; episode < 20; ++episode) {
      train_episode(*second, env, rng_second);
    }
    EXPECT_EQ(first->table_fingerprint(), second->table_fingerprint())
        << agent_kind_name(kind);
  }
}

TEST(AgentEquivalenceTest, SingleRepeatTsrMatchesSrStepForStep) {
  Gridworld env(GridLayout::load(layout_path("junction.txt")), 0, 200);
  AgentConfig cfg;
  cfg.j_max = 1;
  auto sr = make_agent(AgentKind::Sr, env.num_states(), cfg);
  auto tsr = make_agent(AgentKind::Tsr, env.num_states(), cfg);
  // With one repeat slot the two table layouts hash the same byte sequence,
  // so equal fingerprints mean equal tables.
  EXPECT_EQ(sr->table_fingerprint(), tsr->table_fingerprint());

  Rng rng_sr(2024);
  Rng rng_tsr(2024);
  for (int episode = 0; episode < 100; ++episode) {
    train_episode(*sr, env, rng_sr);
    train_episode(*tsr, env, rng_tsr);
    ASSERT_EQ(sr->table_fingerprint(), tsr->table_fingerprint())
        << "diverged at episode " << episode;
  }
  EXPECT_EQ(sr->greedy_policy(), tsr->greedy_policy());
  EXPECT_EQ(rng_sr.next_u64(), rng_tsr.next_u64());
}

TEST(AgentEquivalenceTest, SingleRepeatSkipQMatchesQStepForStep) {
  Gridworld env(GridLayout::load(layout_path("junction.txt")), 0, 200);
  AgentConfig cfg;
  cfg.j_max = 1;
  auto q = make_agent(AgentKind::Q, env.num_states(), cfg);
  auto skip_q = make_agent(AgentKind::SkipQ, env.num_states(), cfg);

  Rng rng_q(4096);
  Rng rng_skip(4096);
  for (int episode = 0; episode < 300; ++episode) {
    train_episode(*q, env, rng_q);
    train_episode(*skip_q, env, rng_skip);
  }
  EXPECT_EQ(q->greedy_policy(), skip_q->greedy_policy());
  EXPECT_EQ(rng_q.next_u64(), rng_skip.next_u64());
}

}  // namespace
}  // namespace tsrlab
