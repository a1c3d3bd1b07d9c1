#include "sr_analytic.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace tsrlab {

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "gamma must lie in [0, 1), got " + std::to_string(gamma));
  }
}

void check_stochastic_rows(const Eigen::MatrixXd& m, const char* what) {
  for (int r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (int c = 0; c < m.cols(); ++c) {
      double v = m(r, c);
      if (v < -1e-12 || v > 1.0 + 1e-12) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(what) + " has an entry outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(what) + " row " + std::to_string(r) +
                      " sums to " + std::to_string(sum) + ", expected 1");
    }
  }
}

}  // namespace

Eigen::MatrixXd TransitionModel::policy_transition() const {
  const int n = num_states();
  Eigen::MatrixXd t_pi = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < num_actions(); ++a) {
    t_pi += policy.col(a).asDiagonal() * t_action[static_cast<size_t>(a)];
  }
  return t_pi;
}

void TransitionModel::validate() const {
  if (t_action.empty()) {
    throw Error(ErrorCode::EmptyInput, "transition model has no actions");
  }
  const int n = num_states();
  for (const auto& t : t_action) {
    if (t.rows() != n || t.cols() != n) {
      throw Error(ErrorCode::ShapeMismatch,
                  "transition matrices disagree in shape");
    }
    check_stochastic_rows(t, "transition matrix");
  }
  if (policy.rows() != n || policy.cols() != num_actions()) {
    throw Error(ErrorCode::ShapeMismatch,
                "policy shape does not match transitions");
  }
  check_stochastic_rows(policy, "policy");
}

TransitionModel diffusion_model(const GridLayout& layout) {
  // Enumerate non-wall cells in reading order, matching Gridworld state ids.
  std::vector<int> state_of(
      static_cast<size_t>(layout.width()) * layout.height(), -1);
  std::vector<Coord> coords;
  for (int r = 0; r < layout.height(); ++r) {
    for (int c = 0; c < layout.width(); ++c) {
      if (layout.cell(r, c) != CellKind::Wall) {
        state_of[static_cast<size_t>(r) * layout.width() + c] =
            static_cast<int>(coords.size());
        coords.push_back({r, c});
      }
    }
  }
  const int n = static_cast<int>(coords.size());
  TransitionModel model;
  for (int a = 0; a < kNumActions; ++a) {
    model.t_action.push_back(Eigen::MatrixXd::Zero(n, n));
  }
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < kNumActions; ++a) {
      int nr = coords[static_cast<size_t>(s)].row + kRowDelta[a];
      int nc = coords[static_cast<size_t>(s)].col + kColDelta[a];
      int next = s;
      if (layout.in_bounds(nr, nc) && layout.cell(nr, nc) != CellKind::Wall) {
        next = state_of[static_cast<size_t>(nr) * layout.width() + nc];
      }
      model.t_action[static_cast<size_t>(a)](s, next) = 1.0;
    }
  }
  model.policy =
      Eigen::MatrixXd::Constant(n, kNumActions, 1.0 / kNumActions);
  return model;
}

TransitionModel open_grid_model(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "grid dimensions must be positive");
  }
  std::string all_floor;
  for (int r = 0; r < height; ++r) {
    all_floor.append(static_cast<size_t>(width), '.');
    all_floor.push_back('\n');
  }
  // parse_layout demands one start and two goals; build the cells directly
  // instead of round-tripping through the layout parser.
  const int n = width * height;
  TransitionModel model;
  for (int a = 0; a < kNumActions; ++a) {
    model.t_action.push_back(Eigen::MatrixXd::Zero(n, n));
  }
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      int s = r * width + c;
      for (int a = 0; a < kNumActions; ++a) {
        int nr = r + kRowDelta[a];
        int nc = c + kColDelta[a];
        int next = s;
        if (nr >= 0 && nr < height && nc >= 0 && nc < width) {
          next = nr * width + nc;
        }
        model.t_action[static_cast<size_t>(a)](s, next) = 1.0;
      }
    }
  }
  model.policy =
      Eigen::MatrixXd::Constant(n, kNumActions, 1.0 / kNumActions);
  return model;
}

Eigen::MatrixXd analytic_sr(const TransitionModel& model, double gamma) {
  check_gamma(gamma);
  model.validate();
  const int n = model.num_states();
  Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - gamma * model.policy_transition();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::MatrixXd m = lu.solve(Eigen::MatrixXd::Identity(n, n));
  double residual =
      (system * m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-9) {
    throw Error(ErrorCode::SingularSystem,
                "occupancy solve residual " + std::to_string(residual));
  }
  return m;
}

Eigen::MatrixXd neumann_sr(const TransitionModel& model, double gamma,
                           int n_terms) {
  check_gamma(gamma);
  model.validate();
  if (n_terms < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_terms must be at least 1");
  }
  const int n = model.num_states();
  Eigen::MatrixXd discounted = gamma * model.policy_transition();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int t = 1; t < n_terms; ++t) {
    term = discounted * term;
    sum += term;
  }
  return sum;
}

std::vector<Eigen::MatrixXd> analytic_tsr(const TransitionModel& model,
                                          double gamma, int j) {
  check_gamma(gamma);
  model.validate();
  if (j < 1) {
    throw Error(ErrorCode::InvalidArgument, "repeat count must be at least 1");
  }
  const int n = model.num_states();
  Eigen::MatrixXd m_policy = analytic_sr(model, gamma);
  std::vector<Eigen::MatrixXd> result;
  result.reserve(model.t_action.size());
  for (const auto& t_a : model.t_action) {
    Eigen::MatrixXd discounted = gamma * t_a;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);  // (gamma*T_a)^k
    Eigen::MatrixXd repeat_sum = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < j; ++k) {
      repeat_sum += power;
      power = discounted * power;
    }
    result.push_back(repeat_sum + power * m_policy);
  }
  return result;
}

namespace {

// Sampling helper: deterministic rows become table lookups, stochastic rows
// a cumulative-probability scan.
struct RowSampler {
  int fixed = -1;
  std::vector<double> cumulative;
  std::vector<int> support;

  explicit RowSampler(const Eigen::RowVectorXd& row) {
    double total = 0.0;
    for (int i = 0; i < row.size(); ++i) {
      if (row(i) > 0.0) {
        total += row(i);
        cumulative.push_back(total);
        support.push_back(i);
      }
    }
    if (support.size() == 1) {
      fixed = support[0];
    }
  }

  int draw(Rng& rng) const {
    if (fixed >= 0) {
      return fixed;
    }
    double u = rng.uniform() * cumulative.back();
    for (size_t i = 0; i + 1 < cumulative.size(); ++i) {
      if (u < cumulative[i]) {
        return support[i];
      }
    }
    return support.back();
  }
};

}  // namespace

McEstimate monte_carlo_sr(const TransitionModel& model, double gamma,
                          int action, int repeat, int n_rollouts, int horizon,
                          std::uint64_t seed, std::vector<int> rows) {
  check_gamma(gamma);
  model.validate();
  if (n_rollouts < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "need at least 2 rollouts for a standard error");
  }
  if (horizon < 1) {
    throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  }
  if (action >= 0 && repeat < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "committed-action mode needs repeat >= 1");
  }
  const int n = model.num_states();
  if (rows.empty()) {
    rows.resize(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
      rows[static_cast<size_t>(s)] = s;
    }
  }

  std::vector<std::vector<RowSampler>> step_sampler;  // [action][state]
  for (const auto& t_a : model.t_action) {
    std::vector<RowSampler> samplers;
    samplers.reserve(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
      samplers.emplace_back(t_a.row(s));
    }
    step_sampler.push_back(std::move(samplers));
  }
  std::vector<RowSampler> policy_sampler;
  policy_sampler.reserve(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    policy_sampler.emplace_back(model.policy.row(s));
  }

  McEstimate out;
  out.rows = rows;
  out.mean = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), n);
  out.stderr_ = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), n);
  Eigen::VectorXd occupancy(n);
  Eigen::VectorXd sum(n);
  Eigen::VectorXd sum_sq(n);

  Rng rng(seed);
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    const int start = rows[ri];
    if (start < 0 || start >= n) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "rollout start state out of range");
    }
    sum.setZero();
    sum_sq.setZero();
    for (int rollout = 0; rollout < n_rollouts; ++rollout) {
      occupancy.setZero();
      int state = start;
      double disc = 1.0;
      for (int t = 0; t < horizon; ++t) {
        occupancy(state) += disc;
        disc *= gamma;
        int a = (action >= 0 && t < repeat)
                    ? action
                    : policy_sampler[static_cast<size_t>(state)].draw(rng);
        state = step_sampler[static_cast<size_t>(a)]
                            [static_cast<size_t>(state)]
                                .draw(rng);
      }
      sum += occupancy;
      sum_sq += occupancy.cwiseProduct(occupancy);
    }
    const double nr = static_cast<double>(n_rollouts);
    Eigen::VectorXd mean = sum / nr;
    // sample variance; clamp tiny negatives caused by cancellation
    Eigen::VectorXd var =
        ((sum_sq - nr * mean.cwiseProduct(mean)) / (nr - 1.0)).cwiseMax(0.0);
    out.mean.row(static_cast<int>(ri)) = mean.transpose();
    out.stderr_.row(static_cast<int>(ri)) =
        (var / nr).cwiseSqrt().transpose();
  }
  return out;
}

FieldGrid sr_field(const Eigen::MatrixXd& m, int target_state,
                   const GridLayout& layout) {
  if (target_state < 0 || target_state >= m.cols()) {
    throw Error(ErrorCode::InvalidState, "target state out of range");
  }
  FieldGrid field;
  field.width = layout.width();
  field.height = layout.height();
  field.values.assign(
      static_cast<size_t>(field.width) * field.height, 0.0);
  field.present.assign(
      static_cast<size_t>(field.width) * field.height, 0);
  int s = 0;
  for (int r = 0; r < field.height; ++r) {
    for (int c = 0; c < field.width; ++c) {
      if (layout.cell(r, c) == CellKind::Wall) {
        continue;
      }
      size_t idx = static_cast<size_t>(r) * field.width + c;
      field.values[idx] = m(s, target_state);
      field.present[idx] = 1;
      if (s == target_state) {
        field.target_row = r;
        field.target_col = c;
      }
      ++s;
    }
  }
  if (s != m.rows()) {
    throw Error(ErrorCode::ShapeMismatch,
                "matrix size does not match the layout's non-wall cells");
  }
  return field;
}

FieldGrid sr_field_open(const Eigen::MatrixXd& m, int target_state, int width,
                        int height) {
  if (width * height != m.rows()) {
    throw Error(ErrorCode::ShapeMismatch,
                "matrix size does not match grid dimensions");
  }
  if (target_state < 0 || target_state >= m.cols()) {
    throw Error(ErrorCode::InvalidState, "target state out of range");
  }
  FieldGrid field;
  field.width = width;
  field.height = height;
  field.values.assign(static_cast<size_t>(width) * height, 0.0);
  field.present.assign(static_cast<size_t>(width) * height, 1);
  for (int s = 0; s < m.rows(); ++s) {
    field.values[static_cast<size_t>(s)] = m(s, target_state);
  }
  field.target_row = target_state / width;
  field.target_col = target_state % width;
  return field;
}

}  // namespace tsrlab
