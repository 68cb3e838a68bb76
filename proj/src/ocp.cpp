/*
 Copyright 2026 The ellmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "ellmpc/ocp.hpp"

#include "ellmpc/qp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ellmpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1.0 / 1024.0;
// Merit changes below this relative size are rounding noise near a solution.
constexpr double kMeritRoundoff = 1e-12;
constexpr double kSlackRegularization = 1e-9;

bool is_spd(const Eigen::MatrixXd& m) {
  if (!m.isApprox(m.transpose(), 1e-12)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

// Decision vector layout:
//   [u_0 .. u_{N-1} | nu_0 .. nu_{N-1} | slack(k, o) | lambda(k, o) (joint only)]
// Collision rows start at stage `first`. With lambda fixed, the stage-0 row
// depends on the measured state only, so it gets neither a row nor a slack.
struct Layout {
  int horizon;
  int obstacles;
  bool joint;
  int first;

  int u(int k) const { return kInputDim * k; }
  int nu(int k) const { return kInputDim * horizon + k; }
  int rows() const { return horizon + 1 - first; }
  int slack(int k, int o) const { return controls() + o * rows() + (k - first); }
  int lambda(int k, int o) const {
    return controls() + obstacles * rows() + o * (horizon + 1) + k;
  }
  int controls() const { return (kInputDim + 1) * horizon; }
  int size() const {
    return controls() + obstacles * rows() + (joint ? obstacles * (horizon + 1) : 0);
  }
};

struct Iterate {
  Eigen::VectorXd w;
  std::vector<StateVector> x;
  std::vector<PathTimingState> z;
  Eigen::MatrixXd k_values;
  double cost = 0.0;
  double violation = 0.0;
};

class SqpSolver {
 public:
  SqpSolver(const OcpModel& model, const OcpInstance& instance, const Eigen::MatrixXd* lambda_bar,
            bool joint)
      : model_(model),
        cfg_(model.config),
        instance_(instance),
        layout_{model.config.horizon, static_cast<int>(instance.obstacles.size()), joint,
                joint ? 0 : 1},
        robot_(model.robot_shape, position_of(instance.x0)) {
    cfg_.validate();
    model_.vehicle.validate();
    const int n_steps = cfg_.horizon;
    const int n_obs = layout_.obstacles;
    if (!robot_.strictly_pd()) {
      throw std::invalid_argument("robot shape must be strictly positive definite");
    }
    if (!joint) {
      if (lambda_bar == nullptr || lambda_bar->rows() != n_steps + 1 || lambda_bar->cols() != n_obs) {
        throw std::invalid_argument("lambda_bar must be (N+1) x number of obstacles");
      }
      if ((lambda_bar->array() < 0.0).any() || (lambda_bar->array() > 1.0).any()) {
        throw std::invalid_argument("lambda_bar entries must lie in [0, 1]");
      }
      lambda_fixed_ = *lambda_bar;
    }

    obstacles_at_.resize(n_obs);
    lambda_lo_.resize(n_obs);
    lambda_hi_.resize(n_obs);
    for (int o = 0; o < n_obs; ++o) {
      const ObstacleTrack& track = instance.obstacles[o];
      for (int k = 0; k <= n_steps; ++k) {
        obstacles_at_[o].push_back(track.at(instance.t_now + k * cfg_.delta));
      }
      lambda_lo_[o] = track.base.strictly_pd() ? 0.0 : kDefaultLambdaTolerance;
      lambda_hi_[o] = 1.0;
    }

    // Timing states are linear in nu: s_k = s_k(0) + Ts(k,:) nu.
    timing_s_ = Eigen::MatrixXd::Zero(n_steps + 1, n_steps);
    timing_sdot_ = Eigen::MatrixXd::Zero(n_steps + 1, n_steps);
    for (int k = 0; k < n_steps; ++k) {
      timing_sdot_.row(k + 1) = timing_sdot_.row(k);
      timing_sdot_(k + 1, k) += cfg_.delta;
      timing_s_.row(k + 1) = timing_s_.row(k) + cfg_.delta * timing_sdot_.row(k);
      timing_s_(k + 1, k) += 0.5 * cfg_.delta * cfg_.delta;
    }
    // s <= 0 relaxed by the creep that s_dot >= s_dot_floor forces. Anchoring
    // the relaxation in absolute time keeps shifted plans feasible.
    const double anchor =
        std::max(instance.z0.s, std::max(0.0, instance.t_now) * cfg_.s_dot_floor);
    s_upper_.resize(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) {
      s_upper_(k) = std::max(0.0, anchor) + k * cfg_.delta * cfg_.s_dot_floor;
    }
  }

  SolveOutput solve(const SolveOutput* warm) {
    const auto start = std::chrono::steady_clock::now();
    SolveOutput out;
    out.t_solve = instance_.t_now;

    Iterate current;
    current.w = initial_guess(warm);
    clip_to_bounds(current.w);
    evaluate(current);

    double penalty = 1.0;
    SolveStatus status = SolveStatus::MaxIters;
    double kkt = kInf;
    int iterations = 0;
    // Multiplier estimate carried between iterations; the KKT test at a new
    // iterate uses it, so a converged point needs no extra QP solve.
    QpSolution multipliers;
    bool have_multipliers = false;
    for (;;) {
      QpProblem qp;
      build_qp(current, qp);
      if (have_multipliers) {
        kkt = qp_kkt_residual(qp, multipliers);
        if (kkt <= cfg_.kkt_tol) {
          status = SolveStatus::Converged;
          break;
        }
      }
      if (iterations >= cfg_.sqp_max_iters) break;

      const QpSolution sol = solve_qp(qp);
      if (sol.status != QpStatus::Optimal) {
        status = sol.status == QpStatus::MaxIterations ? SolveStatus::MaxIters
                                                       : SolveStatus::Infeasible;
        break;
      }
      QpSolution at_current = sol;
      at_current.x.setZero();
      const double kkt_qp = qp_kkt_residual(qp, at_current);
      kkt = have_multipliers ? std::min(kkt, kkt_qp) : kkt_qp;
      if (kkt <= cfg_.kkt_tol) {
        status = SolveStatus::Converged;
        break;
      }

      const double mult_norm = std::max(sol.bound_multipliers.lpNorm<Eigen::Infinity>(),
                                        sol.constraint_multipliers.size() > 0
                                            ? sol.constraint_multipliers.lpNorm<Eigen::Infinity>()
                                            : 0.0);
      penalty = std::max(penalty, 1.5 * mult_norm + 1.0);

      const Eigen::VectorXd& step = sol.x;
      const double merit0 = current.cost + penalty * current.violation;
      const double slope = qp.gradient.dot(step) - penalty * current.violation;
      if (!(slope < 0.0)) break;

      double accepted_alpha = 0.0;
      Iterate trial;
      for (double alpha = 1.0; alpha >= kMinStep; alpha *= 0.5) {
        trial.w = current.w + alpha * step;
        clip_to_bounds(trial.w);
        evaluate(trial);
        const double merit = trial.cost + penalty * trial.violation;
        const double noise = kMeritRoundoff * (1.0 + std::abs(merit0));
        if (merit <= merit0 + kArmijo * alpha * slope + noise) {
          out.merit_history.push_back(merit0);
          out.merit_history.push_back(merit);
          accepted_alpha = alpha;
          break;
        }
      }
      if (accepted_alpha == 0.0) break;
      if (have_multipliers) {
        multipliers.bound_multipliers +=
            accepted_alpha * (sol.bound_multipliers - multipliers.bound_multipliers);
        multipliers.constraint_multipliers +=
            accepted_alpha * (sol.constraint_multipliers - multipliers.constraint_multipliers);
      } else {
        multipliers = at_current;
        have_multipliers = true;
      }
      multipliers.x = Eigen::VectorXd::Zero(layout_.size());
      current = std::move(trial);
      ++iterations;
    }

    fill_output(current, out);
    out.status = status;
    out.kkt_residual = kkt;
    out.sqp_iterations = iterations;
    out.max_defect = max_dynamics_defect(model_, out);
    out.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

 private:
  Eigen::VectorXd initial_guess(const SolveOutput* warm) const {
    const int n_steps = cfg_.horizon;
    const int n_obs = layout_.obstacles;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(layout_.size());
    if (layout_.joint) {
      for (int o = 0; o < n_obs; ++o)
        for (int k = 0; k <= n_steps; ++k) w(layout_.lambda(k, o)) = 0.5;
    }
    if (warm == nullptr || warm->inputs.rows() != n_steps) return w;

    const int shift = std::clamp(
        static_cast<int>(std::lround((instance_.t_now - warm->t_solve) / cfg_.delta)), 0, n_steps);
    for (int k = 0; k < n_steps; ++k) {
      const int src = std::min(k + shift, n_steps - 1);
      w.segment<kInputDim>(layout_.u(k)) = warm->inputs.row(src).transpose();
      w(layout_.nu(k)) = warm->virtual_inputs(src);
    }
    if (warm->slacks.cols() == n_obs && warm->slacks.rows() == n_steps + 1) {
      for (int o = 0; o < n_obs; ++o) {
        for (int k = 0; k <= n_steps; ++k) {
          const int src = std::min(k + shift, n_steps);
          if (k >= layout_.first) w(layout_.slack(k, o)) = warm->slacks(src, o);
          if (layout_.joint) w(layout_.lambda(k, o)) = warm->lambda_params(src, o);
        }
      }
    }
    return w;
  }

  double lambda_at(const Eigen::VectorXd& w, int k, int o) const {
    return layout_.joint ? w(layout_.lambda(k, o)) : lambda_fixed_(k, o);
  }

  void clip_to_bounds(Eigen::VectorXd& w) const {
    for (int k = 0; k < cfg_.horizon; ++k) {
      auto u = w.segment<kInputDim>(layout_.u(k));
      u = u.cwiseMax(cfg_.u_min).cwiseMin(cfg_.u_max);
      w(layout_.nu(k)) = std::clamp(w(layout_.nu(k)), cfg_.nu_min, cfg_.nu_max);
    }
    for (int o = 0; o < layout_.obstacles; ++o) {
      for (int k = 0; k <= cfg_.horizon; ++k) {
        if (k >= layout_.first) w(layout_.slack(k, o)) = std::max(0.0, w(layout_.slack(k, o)));
        if (layout_.joint) {
          double& l = w(layout_.lambda(k, o));
          l = std::clamp(l, lambda_lo_[o], lambda_hi_[o]);
        }
      }
    }
  }

  void rollout(Iterate& it, std::vector<StepJacobians>* jac) const {
    const int n_steps = cfg_.horizon;
    it.x.resize(n_steps + 1);
    it.z.resize(n_steps + 1);
    it.x[0] = instance_.x0;
    it.z[0] = instance_.z0;
    if (jac != nullptr) jac->resize(n_steps);
    for (int k = 0; k < n_steps; ++k) {
      const InputVector u = it.w.segment<kInputDim>(layout_.u(k));
      if (jac != nullptr) {
        it.x[k + 1] = step_rk4_with_jacobians(it.x[k], u, model_.vehicle, cfg_.delta, (*jac)[k]);
      } else {
        it.x[k + 1] = step_rk4(it.x[k], u, model_.vehicle, cfg_.delta);
      }
      it.z[k + 1] = step_timing(it.z[k], it.w(layout_.nu(k)), cfg_.delta);
    }
  }

  void evaluate(Iterate& it, std::vector<StepJacobians>* jac = nullptr) const {
    rollout(it, jac);
    const int n_steps = cfg_.horizon;
    double cost = 0.0;
    for (int k = 0; k < n_steps; ++k) {
      cost += stage_cost(output(it.x[k]), it.z[k], it.w.segment<kInputDim>(layout_.u(k)),
                         it.w(layout_.nu(k)), model_.path, cfg_);
    }
    double violation = 0.0;
    it.k_values.resize(n_steps + 1, layout_.obstacles);
    for (int o = 0; o < layout_.obstacles; ++o) {
      for (int k = 0; k <= n_steps; ++k) {
        const double kv = k_fused(lambda_at(it.w, k, o),
                                  robot_.translated(position_of(it.x[k])), obstacles_at_[o][k])
                              .k_value;
        it.k_values(k, o) = kv;
        if (k < layout_.first) continue;
        const double slack = it.w(layout_.slack(k, o));
        cost += cfg_.soft_penalty_l1 * slack + cfg_.soft_penalty_l2 * slack * slack;
        violation += std::max(0.0, kv + cfg_.collision_margin - slack);
      }
    }
    for (int k = 1; k <= n_steps; ++k) {
      violation += std::max(0.0, model_.path.s0() - it.z[k].s);
      violation += std::max(0.0, it.z[k].s - s_upper_(k));
      violation += std::max(0.0, cfg_.s_dot_floor - it.z[k].s_dot);
      violation += std::max(0.0, it.z[k].s_dot - cfg_.s_dot_max);
      for (int i = 0; i < kStateDim; ++i) {
        if (cfg_.state_min) violation += std::max(0.0, (*cfg_.state_min)(i) - it.x[k](i));
        if (cfg_.state_max) violation += std::max(0.0, it.x[k](i) - (*cfg_.state_max)(i));
      }
    }
    it.cost = cost;
    it.violation = violation;
  }

  void build_qp(Iterate& it, QpProblem& qp) const {
    const int n_steps = cfg_.horizon;
    const int n_obs = layout_.obstacles;
    const int n = layout_.size();
    const int nc = layout_.controls();

    std::vector<StepJacobians> jac;
    evaluate(it, &jac);

    // State sensitivities w.r.t. the stacked inputs.
    std::vector<Eigen::MatrixXd> sens(n_steps + 1,
                                      Eigen::MatrixXd::Zero(kStateDim, kInputDim * n_steps));
    for (int k = 0; k < n_steps; ++k) {
      const int cols = kInputDim * k;
      if (cols > 0) sens[k + 1].leftCols(cols) = jac[k].state * sens[k].leftCols(cols);
      sens[k + 1].block(0, kInputDim * k, kStateDim, kInputDim) = jac[k].input;
    }

    // Tracking residuals [y - p(s); s] of stages 0..N-1 and their Jacobian.
    const int rows = (kOutputDim + 1) * n_steps;
    Eigen::MatrixXd jt = Eigen::MatrixXd::Zero(rows, nc);
    Eigen::VectorXd rt(rows);
    Eigen::VectorXd weights_rt(rows);
    Eigen::MatrixXd weighted_jt(rows, nc);
    for (int k = 0; k < n_steps; ++k) {
      const int r0 = (kOutputDim + 1) * k;
      const PathSample ps = model_.path.eval_with_derivative(it.z[k].s);
      rt.segment<kOutputDim>(r0) = output(it.x[k]) - ps.value;
      rt(r0 + kOutputDim) = it.z[k].s;
      const int cols = kInputDim * k;
      if (cols > 0) {
        jt.block(r0, 0, 3, cols) = sens[k].block(idx::kPos, 0, 3, cols);
        jt.block(r0 + 3, 0, 1, cols) = sens[k].block(idx::kYaw, 0, 1, cols);
      }
      jt.block(r0, kInputDim * n_steps, kOutputDim, n_steps) =
          -ps.derivative * timing_s_.row(k);
      jt.block(r0 + kOutputDim, kInputDim * n_steps, 1, n_steps) = timing_s_.row(k);

      weights_rt.segment<kOutputDim>(r0) = cfg_.W_y * rt.segment<kOutputDim>(r0);
      weights_rt(r0 + kOutputDim) = cfg_.W_s * rt(r0 + kOutputDim);
      weighted_jt.middleRows(r0, kOutputDim) = cfg_.W_y * jt.middleRows(r0, kOutputDim);
      weighted_jt.row(r0 + kOutputDim) = cfg_.W_s * jt.row(r0 + kOutputDim);
    }

    qp.hessian = Eigen::MatrixXd::Zero(n, n);
    qp.gradient = Eigen::VectorXd::Zero(n);
    qp.hessian.topLeftCorner(nc, nc).noalias() = 2.0 * jt.transpose() * weighted_jt;
    qp.gradient.head(nc).noalias() = 2.0 * jt.transpose() * weights_rt;
    for (int k = 0; k < n_steps; ++k) {
      const int iu = layout_.u(k);
      qp.hessian.block<kInputDim, kInputDim>(iu, iu) += 2.0 * cfg_.W_u;
      qp.gradient.segment<kInputDim>(iu) += 2.0 * cfg_.W_u * it.w.segment<kInputDim>(iu);
      const int inu = layout_.nu(k);
      qp.hessian(inu, inu) += 2.0 * cfg_.W_nu;
      qp.gradient(inu) += 2.0 * cfg_.W_nu * it.w(inu);
    }
    const double slack_curvature =
        std::max(2.0 * cfg_.soft_penalty_l2, kSlackRegularization);
    for (int o = 0; o < n_obs; ++o) {
      for (int k = 0; k <= n_steps; ++k) {
        if (k >= layout_.first) {
          const int is = layout_.slack(k, o);
          qp.hessian(is, is) = slack_curvature;
          qp.gradient(is) = cfg_.soft_penalty_l1 + 2.0 * cfg_.soft_penalty_l2 * it.w(is);
        }
        if (layout_.joint) {
          const int il = layout_.lambda(k, o);
          qp.hessian(il, il) = cfg_.rho_lambda;
        }
      }
    }
    qp.hessian = 0.5 * (qp.hessian + qp.hessian.transpose()).eval();

    // Simple bounds on the step.
    qp.lower = Eigen::VectorXd::Constant(n, -kInf);
    qp.upper = Eigen::VectorXd::Constant(n, kInf);
    for (int k = 0; k < n_steps; ++k) {
      const int iu = layout_.u(k);
      qp.lower.segment<kInputDim>(iu) = cfg_.u_min - it.w.segment<kInputDim>(iu);
      qp.upper.segment<kInputDim>(iu) = cfg_.u_max - it.w.segment<kInputDim>(iu);
      const int inu = layout_.nu(k);
      qp.lower(inu) = cfg_.nu_min - it.w(inu);
      qp.upper(inu) = cfg_.nu_max - it.w(inu);
    }
    for (int o = 0; o < n_obs; ++o) {
      for (int k = 0; k <= n_steps; ++k) {
        if (k >= layout_.first) qp.lower(layout_.slack(k, o)) = -it.w(layout_.slack(k, o));
        if (layout_.joint) {
          const int il = layout_.lambda(k, o);
          qp.lower(il) = lambda_lo_[o] - it.w(il);
          qp.upper(il) = lambda_hi_[o] - it.w(il);
        }
      }
    }

    // General rows: timing states, optional state box, collision avoidance.
    int num_state_rows = 0;
    for (int i = 0; i < kStateDim; ++i) {
      const bool lo = cfg_.state_min && std::isfinite((*cfg_.state_min)(i));
      const bool hi = cfg_.state_max && std::isfinite((*cfg_.state_max)(i));
      if (lo || hi) ++num_state_rows;
    }
    const int m = 2 * n_steps + num_state_rows * n_steps + n_obs * layout_.rows();
    qp.constraints = Eigen::MatrixXd::Zero(m, n);
    qp.constraint_lower = Eigen::VectorXd::Constant(m, -kInf);
    qp.constraint_upper = Eigen::VectorXd::Constant(m, kInf);
    int row = 0;
    for (int k = 1; k <= n_steps; ++k) {
      qp.constraints.block(row, kInputDim * n_steps, 1, n_steps) = timing_s_.row(k);
      qp.constraint_lower(row) = model_.path.s0() - it.z[k].s;
      qp.constraint_upper(row) = s_upper_(k) - it.z[k].s;
      ++row;
      qp.constraints.block(row, kInputDim * n_steps, 1, n_steps) = timing_sdot_.row(k);
      qp.constraint_lower(row) = cfg_.s_dot_floor - it.z[k].s_dot;
      qp.constraint_upper(row) = cfg_.s_dot_max - it.z[k].s_dot;
      ++row;
    }
    for (int k = 1; k <= n_steps; ++k) {
      for (int i = 0; i < kStateDim; ++i) {
        const double lo = cfg_.state_min ? (*cfg_.state_min)(i) : -kInf;
        const double hi = cfg_.state_max ? (*cfg_.state_max)(i) : kInf;
        if (!std::isfinite(lo) && !std::isfinite(hi)) continue;
        qp.constraints.block(row, 0, 1, kInputDim * n_steps) = sens[k].row(i);
        qp.constraint_lower(row) = lo - it.x[k](i);
        qp.constraint_upper(row) = hi - it.x[k](i);
        ++row;
      }
    }
    for (int o = 0; o < n_obs; ++o) {
      for (int k = layout_.first; k <= n_steps; ++k) {
        const KSensitivity ks =
            k_sensitivity(lambda_at(it.w, k, o), robot_.translated(position_of(it.x[k])),
                          obstacles_at_[o][k]);
        if (k > 0) {
          qp.constraints.block(row, 0, 1, kInputDim * n_steps) =
              ks.d_center_a.transpose() * sens[k].topRows(3);
        }
        const double slack = it.w(layout_.slack(k, o));
        qp.constraints(row, layout_.slack(k, o)) = -1.0;
        if (layout_.joint) qp.constraints(row, layout_.lambda(k, o)) = ks.d_lambda;
        qp.constraint_upper(row) = -(ks.k + cfg_.collision_margin - slack);
        ++row;
      }
    }
  }

  void fill_output(const Iterate& it, SolveOutput& out) const {
    const int n_steps = cfg_.horizon;
    const int n_obs = layout_.obstacles;
    out.states.resize(n_steps + 1, kStateDim);
    out.timing_states.resize(n_steps + 1, 2);
    out.inputs.resize(n_steps, kInputDim);
    out.virtual_inputs.resize(n_steps);
    out.lambda_params.resize(n_steps + 1, n_obs);
    out.slacks.resize(n_steps + 1, n_obs);
    for (int k = 0; k <= n_steps; ++k) {
      out.states.row(k) = it.x[k].transpose();
      out.timing_states(k, 0) = it.z[k].s;
      out.timing_states(k, 1) = it.z[k].s_dot;
    }
    for (int k = 0; k < n_steps; ++k) {
      out.inputs.row(k) = it.w.segment<kInputDim>(layout_.u(k)).transpose();
      out.virtual_inputs(k) = it.w(layout_.nu(k));
    }
    out.slack_max = 0.0;
    for (int o = 0; o < n_obs; ++o) {
      for (int k = 0; k <= n_steps; ++k) {
        out.lambda_params(k, o) = lambda_at(it.w, k, o);
        out.slacks(k, o) = k >= layout_.first ? it.w(layout_.slack(k, o)) : 0.0;
        out.slack_max = std::max(out.slack_max, out.slacks(k, o));
      }
    }
    out.collision_values = it.k_values;
    out.cost = it.cost;
  }

  const OcpModel& model_;
  const OcpConfig& cfg_;
  const OcpInstance& instance_;
  Layout layout_;
  Ellipsoid robot_;
  Eigen::MatrixXd lambda_fixed_;
  std::vector<std::vector<Ellipsoid>> obstacles_at_;
  std::vector<double> lambda_lo_;
  std::vector<double> lambda_hi_;
  Eigen::MatrixXd timing_s_;
  Eigen::MatrixXd timing_sdot_;
  Eigen::VectorXd s_upper_;
};

}  // namespace

OcpConfig OcpConfig::defaults_for(const VehicleParams& vehicle) {
  OcpConfig cfg;
  cfg.u_min(idx::kThrust) = -0.5 * vehicle.hover_thrust();
  cfg.u_max(idx::kThrust) = 0.5 * vehicle.hover_thrust();
  return cfg;
}

void OcpConfig::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (horizon < 1) fail("horizon must be >= 1");
  if (!(delta > 0.0)) fail("delta must be positive");
  if (!is_spd(W_y)) fail("W_y must be symmetric positive definite");
  if (!is_spd(W_u)) fail("W_u must be symmetric positive definite");
  if (!(W_s > 0.0)) fail("W_s must be positive");
  if (!(W_nu > 0.0)) fail("W_nu must be positive");
  if ((u_min.array() > u_max.array()).any()) fail("u_min must not exceed u_max");
  if (!(nu_min < 0.0 && 0.0 < nu_max)) fail("virtual input bounds must satisfy nu_min < 0 < nu_max");
  if (!(s_dot_max > 0.0)) fail("s_dot_max must be positive");
  if (!(s_dot_floor > 0.0 && s_dot_floor < s_dot_max)) fail("s_dot_floor must lie in (0, s_dot_max)");
  if (!(soft_penalty_l1 >= 0.0) || !(soft_penalty_l2 >= 0.0)) fail("soft penalties must be nonnegative");
  if (!(collision_margin >= 0.0)) fail("collision_margin must be nonnegative");
  if (sqp_max_iters < 1) fail("sqp_max_iters must be >= 1");
  if (!(kkt_tol > 0.0)) fail("kkt_tol must be positive");
  if (!(rho_lambda >= 0.0)) fail("rho_lambda must be nonnegative");
  if (state_min && state_max && (state_min->array() > state_max->array()).any()) {
    fail("state_min must not exceed state_max");
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::MaxIters:
      return "MaxIters";
    case SolveStatus::Infeasible:
      return "Infeasible";
  }
  return "Unknown";
}

double stage_cost(const OutputVector& y, PathTimingState z, const InputVector& u, double nu,
                  const Path& path, const OcpConfig& config) {
  const OutputVector e = y - path.eval(z.s);
  return e.dot(config.W_y * e) + config.W_s * z.s * z.s + u.dot(config.W_u * u) +
         config.W_nu * nu * nu;
}

Ellipsoid robot_at(const OcpModel& model, const StateVector& x) {
  return Ellipsoid(model.robot_shape, position_of(x));
}

SolveOutput solve_parameterized(const OcpModel& model, const OcpInstance& instance,
                                const Eigen::MatrixXd& lambda_bar, const SolveOutput* warm) {
  SqpSolver solver(model, instance, &lambda_bar, false);
  return solver.solve(warm);
}

SolveOutput solve_joint(const OcpModel& model, const OcpInstance& instance,
                        const SolveOutput* warm) {
  SqpSolver solver(model, instance, nullptr, true);
  return solver.solve(warm);
}

double max_dynamics_defect(const OcpModel& model, const SolveOutput& out) {
  double defect = 0.0;
  for (int k = 0; k < out.horizon(); ++k) {
    const StateVector next =
        step_rk4(out.state(k), out.input(k), model.vehicle, model.config.delta);
    defect = std::max(defect, (next - out.state(k + 1)).lpNorm<Eigen::Infinity>());
    const PathTimingState z{out.timing_states(k, 0), out.timing_states(k, 1)};
    const PathTimingState zn = step_timing(z, out.virtual_inputs(k), model.config.delta);
    defect = std::max(defect, std::abs(zn.s - out.timing_states(k + 1, 0)));
    defect = std::max(defect, std::abs(zn.s_dot - out.timing_states(k + 1, 1)));
  }
  return defect;
}

}  // namespace ellmpc
