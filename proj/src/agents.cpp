#include "agents.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "error.hpp"

namespace tsrlab {

void AgentConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (!(alpha_r > 0.0 && alpha_r <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha_r must lie in (0, 1], got " + std::to_string(alpha_r));
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "gamma must lie in [0, 1), got " + std::to_string(gamma));
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidEpsilon,
                "epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
  if (j_max < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "j_max must be at least 1, got " + std::to_string(j_max));
  }
}

SrTensor make_sr_tensor(int num_states, int num_actions) {
  if (num_states < 1 || num_actions < 1) {
    throw Error(ErrorCode::InvalidArgument, "tensor dimensions must be positive");
  }
  SrTensor m;
  m.reserve(static_cast<size_t>(num_actions));
  for (int a = 0; a < num_actions; ++a) {
    m.push_back(MatrixRM::Zero(num_states, num_states));
  }
  return m;
}

SrTensor4 make_sr_tensor4(int num_states, int num_actions, int j_max) {
  if (num_states < 1 || num_actions < 1 || j_max < 1) {
    throw Error(ErrorCode::InvalidArgument, "tensor dimensions must be positive");
  }
  SrTensor4 m(static_cast<size_t>(num_actions));
  for (auto& per_action : m) {
    for (int j = 0; j < j_max; ++j) {
      per_action.push_back(MatrixRM::Zero(num_states, num_states));
    }
  }
  return m;
}

namespace {

void check_state(int s, Eigen::Index n, const char* what) {
  if (s < 0 || s >= n) {
    throw Error(ErrorCode::IndexOutOfRange,
                std::string(what) + " out of range: " + std::to_string(s));
  }
}

void check_action(int a, size_t n) {
  if (a < 0 || static_cast<size_t>(a) >= n) {
    throw Error(ErrorCode::IndexOutOfRange,
                "action out of range: " + std::to_string(a));
  }
}

}  // namespace

void q_update(QTable& q, int s, int a, double r, int s_next, bool terminal,
              double alpha, double gamma) {
  check_state(s, q.rows(), "state");
  check_state(s_next, q.rows(), "successor state");
  check_action(a, static_cast<size_t>(q.cols()));
  double bootstrap = terminal ? 0.0 : q.row(s_next).maxCoeff();
  double target = r + gamma * bootstrap;
  q(s, a) += alpha * (target - q(s, a));
}

void skip_q_update(SkipQTable& sq, QTable& q, const RepeatTrace& trace,
                   int j_requested, double alpha, double gamma) {
  if (trace.empty()) {
    throw Error(ErrorCode::EmptyTrace, "cannot learn from an empty trace");
  }
  const int s0 = trace.front().state;
  const int a = trace.front().action;
  if (j_requested < 1 || j_requested > sq.j_max()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "requested repeat out of range: " +
                    std::to_string(j_requested));
  }
  for (const auto& rec : trace) {
    check_state(rec.state, q.rows(), "state");
    check_state(rec.outcome.next_state, q.rows(), "successor state");
    check_action(rec.action, sq.values.size());
  }
  double target = 0.0;
  double disc = 1.0;
  for (const auto& rec : trace) {
    target += disc * rec.outcome.reward;
    disc *= gamma;
  }
  const StepOutcome& last = trace.back().outcome;
  if (!last.terminal) {
    target += disc * q.row(last.next_state).maxCoeff();
  }
  double& slot = sq.values[static_cast<size_t>(a)](s0, j_requested - 1);
  slot += alpha * (target - slot);
  for (const auto& rec : trace) {
    q_update(q, rec.state, rec.action, rec.outcome.reward,
             rec.outcome.next_state, rec.outcome.terminal, alpha, gamma);
  }
}

void sr_td_row_update(SrTensor& m, int s, int a, int s_next,
                      int bootstrap_action, bool terminal, double alpha,
                      double gamma) {
  check_action(a, m.size());
  check_action(bootstrap_action, m.size());
  const Eigen::Index n = m[static_cast<size_t>(a)].rows();
  check_state(s, n, "state");
  check_state(s_next, n, "successor state");
  Eigen::RowVectorXd target = Eigen::RowVectorXd::Zero(n);
  target(s) += 1.0;
  if (terminal) {
    target(s_next) += gamma;
  } else {
    target += gamma * m[static_cast<size_t>(bootstrap_action)].row(s_next);
  }
  auto row = m[static_cast<size_t>(a)].row(s);
  row += alpha * (target - row);
}

void sr_update(SrTensor& m, Eigen::VectorXd& w, int s, int a, double r,
               int s_next, bool terminal, const AgentConfig& cfg) {
  Eigen::VectorXd values = sr_q_values(m, w, s_next);
  int bootstrap_action = argmax_first({values.data(),
                                       static_cast<size_t>(values.size())});
  sr_td_row_update(m, s, a, s_next, bootstrap_action, terminal, cfg.alpha,
                   cfg.gamma);
  w(s_next) += cfg.alpha_r * (r - w(s_next));
}

void tsr_update(SrTensor4& m, Eigen::VectorXd& w, const RepeatTrace& trace,
                int j_requested, const AgentConfig& cfg) {
  if (trace.empty()) {
    throw Error(ErrorCode::EmptyTrace, "cannot learn from an empty trace");
  }
  const int s0 = trace.front().state;
  const int a = trace.front().action;
  check_action(a, m.size());
  const int j_max = static_cast<int>(m[0].size());
  if (j_requested < 1 || j_requested > j_max) {
    throw Error(ErrorCode::IndexOutOfRange,
                "requested repeat out of range: " +
                    std::to_string(j_requested));
  }
  const Eigen::Index n = m[0][0].rows();
  for (const auto& rec : trace) {
    check_state(rec.state, n, "state");
    check_state(rec.outcome.next_state, n, "successor state");
  }

  Eigen::RowVectorXd target = Eigen::RowVectorXd::Zero(n);
  double disc = 1.0;
  for (const auto& rec : trace) {
    target(rec.state) += disc;
    disc *= cfg.gamma;
  }
  const StepOutcome& last = trace.back().outcome;
  if (last.terminal) {
    target(last.next_state) += disc;
  } else {
    Decision boot = tsr_greedy_pair(m, w, last.next_state);
    target += disc * m[static_cast<size_t>(boot.action)]
                      [static_cast<size_t>(boot.repeat - 1)]
                          .row(last.next_state);
  }
  auto row = m[static_cast<size_t>(a)][static_cast<size_t>(j_requested - 1)]
                 .row(s0);
  row += cfg.alpha * (target - row);
  for (const auto& rec : trace) {
    w(rec.outcome.next_state) +=
        cfg.alpha_r * (rec.outcome.reward - w(rec.outcome.next_state));
  }
}

Eigen::VectorXd sr_q_values(const SrTensor& m, const Eigen::VectorXd& w,
                            int s) {
  if (m.empty() || m[0].cols() != w.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "occupancy tensor and reward vector disagree in shape");
  }
  check_state(s, m[0].rows(), "state");
  Eigen::VectorXd values(static_cast<Eigen::Index>(m.size()));
  for (size_t a = 0; a < m.size(); ++a) {
    values(static_cast<Eigen::Index>(a)) = m[a].row(s).dot(w);
  }
  return values;
}

Eigen::MatrixXd tsr_q_values(const SrTensor4& m, const Eigen::VectorXd& w,
                             int s) {
  if (m.empty() || m[0].empty() || m[0][0].cols() != w.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "occupancy tensor and reward vector disagree in shape");
  }
  check_state(s, m[0][0].rows(), "state");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(m.size()),
                         static_cast<Eigen::Index>(m[0].size()));
  for (size_t a = 0; a < m.size(); ++a) {
    for (size_t j = 0; j < m[a].size(); ++j) {
      values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) =
          m[a][j].row(s).dot(w);
    }
  }
  return values;
}

Decision tsr_greedy_pair(const SrTensor4& m, const Eigen::VectorXd& w,
                         int s) {
  Eigen::MatrixXd values = tsr_q_values(m, w, s);
  Eigen::VectorXd best_per_action = values.rowwise().maxCoeff();
  int action = argmax_first(
      {best_per_action.data(), static_cast<size_t>(best_per_action.size())});
  Eigen::RowVectorXd row = values.row(action);
  int repeat =
      argmax_last({row.data(), static_cast<size_t>(row.size())}) + 1;
  return {action, repeat};
}

Decision tsr_select(const SrTensor4& m, const Eigen::VectorXd& w, int s,
                    double epsilon, Rng& rng) {
  Eigen::MatrixXd values = tsr_q_values(m, w, s);
  Eigen::VectorXd best_per_action = values.rowwise().maxCoeff();
  int action = epsilon_greedy(
      rng, {best_per_action.data(),
            static_cast<size_t>(best_per_action.size())},
      epsilon);
  if (values.cols() == 1) {
    return {action, 1};
  }
  Eigen::RowVectorXd row = values.row(action);
  int repeat =
      argmax_last({row.data(), static_cast<size_t>(row.size())}) + 1;
  return {action, repeat};
}

Decision select_random_skip(Rng& rng, std::span<const double> action_values,
                            double epsilon, int j_max) {
  int action = epsilon_greedy(rng, action_values, epsilon);
  if (j_max == 1) {
    return {action, 1};
  }
  int repeat = 1;
  if (rng.uniform() < epsilon) {
    repeat = 1 + rng.uniform_int(j_max);
  }
  return {action, repeat};
}

namespace {

const char* kAgentNames[] = {"q", "skip_q", "sr", "sr_random_skip", "tsr"};

std::uint64_t fnv1a64(const double* data, size_t count, std::uint64_t hash) {
  for (size_t i = 0; i < count; ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(data[i]);
    for (int b = 0; b < 8; ++b) {
      hash ^= (bits >> (8 * b)) & 0xffULL;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;

// Keeps the per-state greedy policy current without recomputing every state
// after every update: observers mark the states whose rows changed, and
// reward-vector changes (which shift values everywhere) invalidate the lot.
class PolicyCachingAgent : public Agent {
 public:
  PolicyCachingAgent(int num_states, const AgentConfig& cfg)
      : cfg_(cfg), num_states_(num_states) {
    cfg_.validate();
    if (num_states < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "agent needs at least one state");
    }
    policy_.choices.assign(static_cast<size_t>(num_states), Decision{});
    dirty_.assign(static_cast<size_t>(num_states), 1);
  }

  int num_states() const override { return num_states_; }

  const GreedyPolicy& greedy_policy() const override {
    if (all_dirty_) {
      for (int s = 0; s < num_states_; ++s) {
        policy_.choices[static_cast<size_t>(s)] = select_greedy(s);
      }
      std::fill(dirty_.begin(), dirty_.end(), 0);
      all_dirty_ = false;
    } else {
      for (int s = 0; s < num_states_; ++s) {
        if (dirty_[static_cast<size_t>(s)]) {
          policy_.choices[static_cast<size_t>(s)] = select_greedy(s);
          dirty_[static_cast<size_t>(s)] = 0;
        }
      }
    }
    return policy_;
  }

 protected:
  void mark_dirty(int s) { dirty_[static_cast<size_t>(s)] = 1; }
  void mark_all_dirty() { all_dirty_ = true; }

  AgentConfig cfg_;
  int num_states_;

 private:
  mutable GreedyPolicy policy_;
  mutable std::vector<char> dirty_;
  mutable bool all_dirty_ = true;
};

class QAgent final : public PolicyCachingAgent {
 public:
  QAgent(int num_states, const AgentConfig& cfg)
      : PolicyCachingAgent(num_states, cfg),
        q_(make_q_table(num_states, kNumActions)) {}

  AgentKind kind() const override { return AgentKind::Q; }

  Decision select(int state, Rng& rng) override {
    int a = epsilon_greedy(
        rng, {q_.row(state).data(), static_cast<size_t>(kNumActions)},
        cfg_.epsilon);
    return {a, 1};
  }

  Decision select_greedy(int state) const override {
    int a = argmax_first(
        {q_.row(state).data(), static_cast<size_t>(kNumActions)});
    return {a, 1};
  }

  void observe(const RepeatTrace& trace, int /*j_requested*/) override {
    for (const auto& rec : trace) {
      q_update(q_, rec.state, rec.action, rec.outcome.reward,
               rec.outcome.next_state, rec.outcome.terminal, cfg_.alpha,
               cfg_.gamma);
      mark_dirty(rec.state);
    }
  }

  std::uint64_t table_fingerprint() const override {
    return fnv1a64(q_.data(), static_cast<size_t>(q_.size()), kFnvOffset);
  }

 private:
  QTable q_;
};

class SkipQAgent final : public PolicyCachingAgent {
 public:
  SkipQAgent(int num_states, const AgentConfig& cfg)
      : PolicyCachingAgent(num_states, cfg),
        sq_(SkipQTable::zeros(num_states, kNumActions, cfg.j_max)),
        q_(make_q_table(num_states, kNumActions)) {}

  AgentKind kind() const override { return AgentKind::SkipQ; }

  Decision select(int state, Rng& rng) override {
    int a = epsilon_greedy(
        rng, {q_.row(state).data(), static_cast<size_t>(kNumActions)},
        cfg_.epsilon);
    if (cfg_.j_max == 1) {
      return {a, 1};
    }
    int repeat;
    if (rng.uniform() < cfg_.epsilon) {
      repeat = 1 + rng.uniform_int(cfg_.j_max);
    } else {
      const auto row = sq_.values[static_cast<size_t>(a)].row(state);
      repeat = argmax_last({row.data(),
                            static_cast<size_t>(cfg_.j_max)}) + 1;
    }
    return {a, repeat};
  }

  Decision select_greedy(int state) const override {
    int a = argmax_first(
        {q_.row(state).data(), static_cast<size_t>(kNumActions)});
    if (cfg_.j_max == 1) {
      return {a, 1};
    }
    const auto row = sq_.values[static_cast<size_t>(a)].row(state);
    int repeat =
        argmax_last({row.data(), static_cast<size_t>(cfg_.j_max)}) + 1;
    return {a, repeat};
  }

  void observe(const RepeatTrace& trace, int j_requested) override {
    skip_q_update(sq_, q_, trace, j_requested, cfg_.alpha, cfg_.gamma);
    for (const auto& rec : trace) {
      mark_dirty(rec.state);
    }
  }

  std::uint64_t table_fingerprint() const override {
    std::uint64_t h = kFnvOffset;
    for (const auto& per_action : sq_.values) {
      h = fnv1a64(per_action.data(), static_cast<size_t>(per_action.size()),
                  h);
    }
    return fnv1a64(q_.data(), static_cast<size_t>(q_.size()), h);
  }

 private:
  SkipQTable sq_;
  QTable q_;
};

// Shared machinery of the two one-step-SR agents; they differ only in how
// training-time decisions are drawn.
class SrAgentBase : public PolicyCachingAgent {
 public:
  SrAgentBase(int num_states, const AgentConfig& cfg)
      : PolicyCachingAgent(num_states, cfg),
        m_(make_sr_tensor(num_states, kNumActions)),
        w_(Eigen::VectorXd::Zero(num_states)) {}

  Decision select_greedy(int state) const override {
    Eigen::VectorXd values = sr_q_values(m_, w_, state);
    int a = argmax_first({values.data(),
                          static_cast<size_t>(values.size())});
    return {a, 1};
  }

  void observe(const RepeatTrace& trace, int /*j_requested*/) override {
    for (const auto& rec : trace) {
      double before = w_(rec.outcome.next_state);
      sr_update(m_, w_, rec.state, rec.action, rec.outcome.reward,
                rec.outcome.next_state, rec.outcome.terminal, cfg_);
      if (w_(rec.outcome.next_state) != before) {
        mark_all_dirty();
      }
      mark_dirty(rec.state);
    }
  }

  std::uint64_t table_fingerprint() const override {
    std::uint64_t h = kFnvOffset;
    for (const auto& per_action : m_) {
      h = fnv1a64(per_action.data(), static_cast<size_t>(per_action.size()),
                  h);
    }
    return fnv1a64(w_.data(), static_cast<size_t>(w_.size()), h);
  }

 protected:
  SrTensor m_;
  Eigen::VectorXd w_;
};

class SrAgent final : public SrAgentBase {
 public:
  using SrAgentBase::SrAgentBase;

  AgentKind kind() const override { return AgentKind::Sr; }

  Decision select(int state, Rng& rng) override {
    Eigen::VectorXd values = sr_q_values(m_, w_, state);
    int a = epsilon_greedy(
        rng, {values.data(), static_cast<size_t>(values.size())},
        cfg_.epsilon);
    return {a, 1};
  }
};

class SrRandomSkipAgent final : public SrAgentBase {
 public:
  using SrAgentBase::SrAgentBase;

  AgentKind kind() const override { return AgentKind::SrRandomSkip; }

  Decision select(int state, Rng& rng) override {
    Eigen::VectorXd values = sr_q_values(m_, w_, state);
    return select_random_skip(
        rng, {values.data(), static_cast<size_t>(values.size())},
        cfg_.epsilon, cfg_.j_max);
  }
};

class TsrAgent final : public PolicyCachingAgent {
 public:
  TsrAgent(int num_states, const AgentConfig& cfg)
      : PolicyCachingAgent(num_states, cfg),
        m_(make_sr_tensor4(num_states, kNumActions, cfg.j_max)),
        w_(Eigen::VectorXd::Zero(num_states)) {}

  AgentKind kind() const override { return AgentKind::Tsr; }

  Decision select(int state, Rng& rng) override {
    return tsr_select(m_, w_, state, cfg_.epsilon, rng);
  }

  Decision select_greedy(int state) const override {
    return tsr_greedy_pair(m_, w_, state);
  }

  void observe(const RepeatTrace& trace, int j_requested) override {
    Eigen::VectorXd w_before = w_;
    tsr_update(m_, w_, trace, j_requested, cfg_);
    if (w_ != w_before) {
      mark_all_dirty();
    }
    mark_dirty(trace.front().state);
  }

  std::uint64_t table_fingerprint() const override {
    std::uint64_t h = kFnvOffset;
    for (const auto& per_action : m_) {
      for (const auto& per_repeat : per_action) {
        h = fnv1a64(per_repeat.data(),
                    static_cast<size_t>(per_repeat.size()), h);
      }
    }
    return fnv1a64(w_.data(), static_cast<size_t>(w_.size()), h);
  }

 private:
  SrTensor4 m_;
  Eigen::VectorXd w_;
};

}  // namespace

const char* agent_kind_name(AgentKind kind) {
  int idx = static_cast<int>(kind);
  if (idx < 0 || idx >= static_cast<int>(std::size(kAgentNames))) {
    throw Error(ErrorCode::InvalidArgument, "unknown agent kind");
  }
  return kAgentNames[idx];
}

AgentKind agent_kind_from_name(const std::string& name) {
  for (size_t i = 0; i < std::size(kAgentNames); ++i) {
    if (name == kAgentNames[i]) {
      return static_cast<AgentKind>(i);
    }
  }
  std::string valid;
  for (size_t i = 0; i < std::size(kAgentNames); ++i) {
    valid += (i ? ", " : "") + std::string(kAgentNames[i]);
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown agent name '" + name + "' (valid: " + valid + ")");
}

std::unique_ptr<Agent> make_agent(AgentKind kind, int num_states,
                                  const AgentConfig& cfg) {
  switch (kind) {
    case AgentKind::Q:
      return std::make_unique<QAgent>(num_states, cfg);
    case AgentKind::SkipQ:
      return std::make_unique<SkipQAgent>(num_states, cfg);
    case AgentKind::Sr:
      return std::make_unique<SrAgent>(num_states, cfg);
    case AgentKind::SrRandomSkip:
      return std::make_unique<SrRandomSkipAgent>(num_states, cfg);
    case AgentKind::Tsr:
      return std::make_unique<TsrAgent>(num_states, cfg);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown agent kind");
}

}  // namespace tsrlab
