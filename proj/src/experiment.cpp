#include "experiment.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "error.hpp"

namespace tsrlab {

void ExperimentParams::validate() const {
  if (episodes_per_phase < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "episodes_per_phase must be at least 1");
  }
  if (step_cap < 1) {
    throw Error(ErrorCode::InvalidArgument, "step_cap must be at least 1");
  }
  if (eval_cadence < 1) {
    throw Error(ErrorCode::InvalidArgument, "eval_cadence must be at least 1");
  }
  agent.validate();
}

void train_episode(Agent& agent, const Gridworld& env, Rng& rng) {
  int state = env.start_state();
  int steps = 0;
  while (true) {
    Decision d = agent.select(state, rng);
    RepeatTrace trace = env.execute_repeat(state, d.action, d.repeat, steps);
    steps += static_cast<int>(trace.size());
    agent.observe(trace, d.repeat);
    const StepOutcome& last = trace.back().outcome;
    if (last.terminal || last.truncated) {
      break;
    }
    state = last.next_state;
  }
}

EvalResult evaluate_greedy(const Agent& agent, const Gridworld& env,
                           int eval_step_cap) {
  if (eval_step_cap != env.step_cap()) {
    Gridworld capped(env.layout(), env.active_goal(), eval_step_cap);
    return evaluate_greedy(agent, capped, eval_step_cap);
  }
  EvalResult result;
  const GreedyPolicy& policy = agent.greedy_policy();
  int state = env.start_state();
  int steps = 0;
  while (true) {
    Decision d = policy.choices[static_cast<size_t>(state)];
    ++result.decisions;
    RepeatTrace trace = env.execute_repeat(state, d.action, d.repeat, steps);
    steps += static_cast<int>(trace.size());
    result.transitions += static_cast<int>(trace.size());
    for (const auto& rec : trace) {
      result.ret += rec.outcome.reward;
    }
    const StepOutcome& last = trace.back().outcome;
    if (last.terminal) {
      break;
    }
    if (last.truncated) {
      result.truncated = true;
      break;
    }
    state = last.next_state;
  }
  return result;
}

RunOutput run_revaluation(const GridLayout& layout, AgentKind kind,
                          const ExperimentParams& params, std::uint64_t seed) {
  params.validate();
  Gridworld env(layout, 0, params.step_cap);
  std::unique_ptr<Agent> agent =
      make_agent(kind, env.num_states(), params.agent);

  RunOutput out;
  out.records.reserve(static_cast<size_t>(2 * params.episodes_per_phase));
  GreedyPolicy prev = agent->greedy_policy();
  EvalResult last_eval;

  for (int phase_idx = 0; phase_idx < 2; ++phase_idx) {
    env.set_active_goal(phase_idx);
    out.phase_start_fingerprints[static_cast<size_t>(phase_idx)] =
        agent->table_fingerprint();
    Rng rng(mix_stream(seed, static_cast<std::uint64_t>(kind),
                       static_cast<std::uint64_t>(phase_idx + 1)));
    for (int ep = 0; ep < params.episodes_per_phase; ++ep) {
      train_episode(*agent, env, rng);

      const GreedyPolicy& cur = agent->greedy_policy();
      double tv = (phase_idx == 0 && ep == 0) ? 0.0
                                              : total_variation(prev, cur);
      prev = cur;

      if (ep == 0 || (ep + 1) % params.eval_cadence == 0) {
        last_eval = evaluate_greedy(*agent, env, params.step_cap);
      }
      out.records.push_back({phase_idx + 1, ep, last_eval.ret,
                             last_eval.transitions, last_eval.decisions, tv});
    }
  }
  return out;
}

namespace {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Sample standard deviation (n-1 denominator) over sqrt(n); 0 for one seed.
MeanStderr mean_stderr(std::span<const double> values) {
  const size_t n = values.size();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  MeanStderr r;
  r.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double sq = 0.0;
    for (double v : values) {
      double d = v - r.mean;
      sq += d * d;
    }
    double var = sq / static_cast<double>(n - 1);
    r.stderr_ = std::sqrt(var < 0.0 ? 0.0 : var) /
                std::sqrt(static_cast<double>(n));
  }
  return r;
}

}  // namespace

AggregateSeries aggregate(const std::vector<std::vector<EpisodeRecord>>& runs) {
  if (runs.empty()) {
    throw Error(ErrorCode::EmptyInput, "no runs to aggregate");
  }
  const size_t len = runs.front().size();
  for (const auto& run : runs) {
    if (run.size() != len) {
      throw Error(ErrorCode::LengthMismatch,
                  "per-seed record lists differ in length: " +
                      std::to_string(run.size()) + " vs " +
                      std::to_string(len));
    }
  }

  AggregateSeries agg;
  agg.phase.reserve(len);
  agg.episode.reserve(len);
  std::vector<double> column(runs.size());
  auto fill = [&](auto getter) {
    for (size_t i = 0; i < runs.size(); ++i) {
      column[i] = getter(runs[i]);
    }
    return mean_stderr(column);
  };
  for (size_t ep = 0; ep < len; ++ep) {
    agg.phase.push_back(runs.front()[ep].phase);
    agg.episode.push_back(runs.front()[ep].episode);
    MeanStderr r = fill([&](const std::vector<EpisodeRecord>& run) {
      return run[ep].eval_return;
    });
    agg.return_mean.push_back(r.mean);
    agg.return_stderr.push_back(r.stderr_);
    r = fill([&](const std::vector<EpisodeRecord>& run) {
      return static_cast<double>(run[ep].eval_transitions);
    });
    agg.transitions_mean.push_back(r.mean);
    agg.transitions_stderr.push_back(r.stderr_);
    r = fill([&](const std::vector<EpisodeRecord>& run) {
      return static_cast<double>(run[ep].eval_decisions);
    });
    agg.decisions_mean.push_back(r.mean);
    agg.decisions_stderr.push_back(r.stderr_);
    r = fill([&](const std::vector<EpisodeRecord>& run) {
      return run[ep].tv;
    });
    agg.tv_mean.push_back(r.mean);
    agg.tv_stderr.push_back(r.stderr_);
  }
  return agg;
}

std::optional<int> episodes_to_convergence(std::span<const double> transitions,
                                           double optimal, int window) {
  if (window < 1) {
    throw Error(ErrorCode::InvalidArgument, "window must be at least 1");
  }
  int run_start = -1;
  int run_length = 0;
  for (size_t i = 0; i < transitions.size(); ++i) {
    if (transitions[i] == optimal) {
      if (run_length == 0) {
        run_start = static_cast<int>(i);
      }
      if (++run_length >= window) {
        return run_start;
      }
    } else {
      run_length = 0;
    }
  }
  return std::nullopt;
}

}  // namespace tsrlab
