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

// Dual active-set QP solver in the Goldfarb-Idnani form. The factorization
// H = L L^T is computed once; J = L^-T Q and the upper-triangular R of the
// active constraint normals are maintained with Givens rotations.

#include "ellmpc/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ellmpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// One-sided row  sign * a^T x >= rhs,  scaled to unit normal. Bound rows keep
// a = e_var and skip the dense column.
struct Row {
  int var = -1;      // >= 0 for a variable bound
  int source = -1;   // originating bound / constraint index
  double sign = 1.0;
  double scale = 1.0;
  double rhs = 0.0;
  bool equality = false;
};

class ActiveSetSolver {
 public:
  ActiveSetSolver(const QpProblem& qp, const QpOptions& options) : qp_(qp), options_(options) {
    n_ = static_cast<int>(qp.num_variables());
    // Column access to the constraint normals is contiguous.
    normals_ = qp.constraints.transpose();
    build_rows();
  }

  QpSolution solve() {
    QpSolution sol;
    sol.x = Eigen::VectorXd::Zero(n_);
    sol.bound_multipliers = Eigen::VectorXd::Zero(n_);
    sol.constraint_multipliers = Eigen::VectorXd::Zero(qp_.num_constraints());

    Eigen::LLT<Eigen::MatrixXd> llt(qp_.hessian);
    if (llt.info() != Eigen::Success || !qp_.hessian.allFinite()) {
      sol.status = QpStatus::NotConvex;
      return sol;
    }
    const Eigen::MatrixXd lower = llt.matrixL();
    j_ = lower.transpose().triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(n_, n_));
    r_ = Eigen::MatrixXd::Zero(n_, n_);
    active_.assign(n_ + 1, -1);
    u_ = Eigen::VectorXd::Zero(n_ + 1);
    is_active_.assign(rows_.size(), false);
    iq_ = 0;
    r_norm_ = 1.0;

    x_ = -llt.solve(qp_.gradient);

    const int max_iter =
        options_.max_iterations > 0 ? options_.max_iterations
                                    : 10 * (n_ + static_cast<int>(rows_.size())) + 10;

    sol.status = add_equalities() ? run(max_iter, sol.iterations) : QpStatus::Infeasible;
    finish(sol);
    return sol;
  }

 private:
  void build_rows() {
    auto add_bound = [&](int var, double value, double sign) {
      if (!std::isfinite(value)) return;
      Row row;
      row.var = var;
      row.source = var;
      row.sign = sign;
      row.rhs = sign * value;
      rows_.push_back(row);
    };
    auto add_general = [&](int i, double value, double sign, bool equality) {
      if (!std::isfinite(value)) return;
      const double norm = qp_.constraints.row(i).norm();
      Row row;
      row.source = i;
      row.sign = sign;
      row.scale = norm > 0.0 ? 1.0 / norm : 1.0;
      row.rhs = sign * value * row.scale;
      row.equality = equality;
      rows_.push_back(row);
    };
    const bool has_lower = qp_.lower.size() == n_;
    const bool has_upper = qp_.upper.size() == n_;
    for (int i = 0; i < n_; ++i) {
      const double lo = has_lower ? qp_.lower(i) : -kInf;
      const double hi = has_upper ? qp_.upper(i) : kInf;
      if (lo > hi) throw std::invalid_argument("QP variable bounds are inconsistent");
      add_bound(i, lo, 1.0);
      add_bound(i, hi, -1.0);
    }
    for (int i = 0; i < qp_.num_constraints(); ++i) {
      const double lo = qp_.constraint_lower(i);
      const double hi = qp_.constraint_upper(i);
      if (lo > hi) throw std::invalid_argument("QP constraint bounds are inconsistent");
      if (lo == hi) {
        add_general(i, lo, 1.0, true);
      } else {
        add_general(i, lo, 1.0, false);
        add_general(i, hi, -1.0, false);
      }
    }
  }

  Eigen::VectorXd normal(const Row& row) const {
    if (row.var >= 0) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n_);
      a(row.var) = row.sign;
      return a;
    }
    return (row.sign * row.scale) * normals_.col(row.source);
  }

  double row_value(const Row& row) const {
    if (row.var >= 0) return row.sign * x_(row.var);
    return row.sign * row.scale * normals_.col(row.source).dot(x_);
  }

  // d = J^T n
  void compute_d(const Row& row) {
    if (row.var >= 0) {
      d_ = row.sign * j_.row(row.var).transpose();
    } else {
      d_.noalias() = (row.sign * row.scale) * (j_.transpose() * normals_.col(row.source));
    }
  }

  void compute_z_and_r() {
    z_ = j_.rightCols(n_ - iq_) * d_.tail(n_ - iq_);
    if (iq_ > 0) {
      r_vec_ = r_.topLeftCorner(iq_, iq_).triangularView<Eigen::Upper>().solve(d_.head(iq_));
    } else {
      r_vec_.resize(0);
    }
  }

  bool add_constraint() {
    for (int j = n_ - 1; j >= iq_ + 1; --j) {
      double cc = d_(j - 1);
      double ss = d_(j);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      d_(j) = 0.0;
      ss /= h;
      cc /= h;
      if (cc < 0.0) {
        cc = -cc;
        ss = -ss;
        d_(j - 1) = -h;
      } else {
        d_(j - 1) = h;
      }
      rotate_columns(j - 1, j, cc, ss);
    }
    ++iq_;
    r_.col(iq_ - 1).head(iq_) = d_.head(iq_);
    if (std::abs(d_(iq_ - 1)) <= kEps * r_norm_) return false;
    r_norm_ = std::max(r_norm_, std::abs(d_(iq_ - 1)));
    return true;
  }

  // Removes the active constraint stored at position qq; the pending entry at
  // position iq_ (if any) shifts down with the others.
  void delete_constraint(int qq) {
    for (int i = qq; i < iq_ - 1; ++i) {
      active_[i] = active_[i + 1];
      u_(i) = u_(i + 1);
      r_.col(i) = r_.col(i + 1);
    }
    active_[iq_ - 1] = active_[iq_];
    u_(iq_ - 1) = u_(iq_);
    active_[iq_] = -1;
    u_(iq_) = 0.0;
    r_.col(iq_ - 1).head(iq_).setZero();
    --iq_;
    if (iq_ == 0) return;
    for (int j = qq; j < iq_; ++j) {
      double cc = r_(j, j);
      double ss = r_(j + 1, j);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      cc /= h;
      ss /= h;
      r_(j + 1, j) = 0.0;
      if (cc < 0.0) {
        r_(j, j) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        r_(j, j) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = j + 1; k < iq_; ++k) {
        const double t1 = r_(j, k);
        const double t2 = r_(j + 1, k);
        r_(j, k) = t1 * cc + t2 * ss;
        r_(j + 1, k) = xny * (t1 + r_(j, k)) - t2;
      }
      rotate_columns(j, j + 1, cc, ss);
    }
  }

  // [c1 c2] <- [c1 c2] G for the rotation (cc, ss), in reflector form.
  void rotate_columns(int c1, int c2, double cc, double ss) {
    const double xny = ss / (1.0 + cc);
    auto a = j_.col(c1);
    auto b = j_.col(c2);
    tmp_ = a;
    a = cc * tmp_ + ss * b;
    b = xny * (tmp_ + a) - b;
  }

  bool add_equalities() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Row& row = rows_[i];
      if (!row.equality) continue;
      compute_d(row);
      compute_z_and_r();
      const Eigen::VectorXd np = normal(row);
      double t2 = 0.0;
      const double znp = z_.dot(np);
      if (z_.squaredNorm() > kEps && std::abs(znp) > 0.0) {
        t2 = (row.rhs - row_value(row)) / znp;
      }
      x_ += t2 * z_;
      if (iq_ > 0) u_.head(iq_) -= t2 * r_vec_;
      u_(iq_) = t2;
      active_[iq_] = static_cast<int>(i);
      if (!add_constraint()) return false;
      is_active_[i] = true;
      ++num_equalities_;
    }
    return true;
  }

  QpStatus run(int max_iter, int& iterations) {
    const int neq = num_equalities_;
    while (true) {
      if (++iterations > max_iter) return QpStatus::MaxIterations;

      int ip = -1;
      double worst = 0.0;
      double s_ip = 0.0;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (is_active_[i]) continue;
        const Row& row = rows_[i];
        const double s = row_value(row) - row.rhs;
        const double tol = options_.feasibility_tol * (1.0 + std::abs(row.rhs));
        if (s < -tol && s < worst) {
          worst = s;
          ip = static_cast<int>(i);
          s_ip = s;
        }
      }
      if (ip < 0) return QpStatus::Optimal;

      const Row& prow = rows_[ip];
      const Eigen::VectorXd np = normal(prow);
      u_(iq_) = 0.0;
      active_[iq_] = ip;

      while (true) {
        compute_d(prow);
        compute_z_and_r();

        double t1 = kInf;
        int l = -1;
        for (int k = neq; k < iq_; ++k) {
          if (r_vec_(k) > 0.0) {
            const double ratio = u_(k) / r_vec_(k);
            if (ratio < t1) {
              t1 = ratio;
              l = k;
            }
          }
        }
        double t2 = kInf;
        if (z_.squaredNorm() > kEps) t2 = -s_ip / z_.dot(np);
        if (!(t2 > 0.0)) t2 = kInf;
        const double t = std::min(t1, t2);
        if (!std::isfinite(t)) return QpStatus::Infeasible;

        if (!std::isfinite(t2)) {
          if (iq_ > 0) u_.head(iq_) -= t * r_vec_;
          u_(iq_) += t;
          is_active_[active_[l]] = false;
          delete_constraint(l);
          if (++iterations > max_iter) return QpStatus::MaxIterations;
          continue;
        }

        x_ += t * z_;
        if (iq_ > 0) u_.head(iq_) -= t * r_vec_;
        u_(iq_) += t;

        if (t2 <= t1) {
          if (!add_constraint()) return QpStatus::Infeasible;
          is_active_[ip] = true;
          break;
        }
        is_active_[active_[l]] = false;
        delete_constraint(l);
        s_ip = row_value(prow) - prow.rhs;
        if (++iterations > max_iter) return QpStatus::MaxIterations;
      }
    }
  }

  void finish(QpSolution& sol) const {
    sol.x = x_;
    if (sol.status == QpStatus::Optimal) {
      // Active bounds hold exactly rather than to rounding.
      for (int k = 0; k < iq_; ++k) {
        const Row& row = rows_[active_[k]];
        if (row.var >= 0) sol.x(row.var) = row.sign * row.rhs;
      }
    }
    sol.objective = 0.5 * sol.x.dot(qp_.hessian * sol.x) + qp_.gradient.dot(sol.x);
    sol.active_constraints = iq_;
    for (int k = 0; k < iq_; ++k) {
      const Row& row = rows_[active_[k]];
      // Lagrangian term -u * sign * scale * a^T x  maps to  y = -u * sign * scale.
      const double y = -u_(k) * row.sign * row.scale;
      if (row.var >= 0) {
        sol.bound_multipliers(row.source) += y;
      } else {
        sol.constraint_multipliers(row.source) += y;
      }
    }
  }

  const QpProblem& qp_;
  QpOptions options_;
  int n_ = 0;
  std::vector<Row> rows_;

  Eigen::MatrixXd normals_;
  Eigen::MatrixXd j_;
  Eigen::MatrixXd r_;
  Eigen::VectorXd x_;
  Eigen::VectorXd u_;
  Eigen::VectorXd d_;
  Eigen::VectorXd z_;
  Eigen::VectorXd r_vec_;
  Eigen::VectorXd tmp_;
  std::vector<int> active_;
  std::vector<bool> is_active_;
  int iq_ = 0;
  int num_equalities_ = 0;
  double r_norm_ = 1.0;
};

}  // namespace

QpProblem QpProblem::unconstrained(const Eigen::MatrixXd& hessian,
                                   const Eigen::VectorXd& gradient) {
  QpProblem qp;
  qp.hessian = hessian;
  qp.gradient = gradient;
  const Eigen::Index n = gradient.size();
  qp.lower = Eigen::VectorXd::Constant(n, -kInf);
  qp.upper = Eigen::VectorXd::Constant(n, kInf);
  qp.constraints = Eigen::MatrixXd::Zero(0, n);
  qp.constraint_lower.resize(0);
  qp.constraint_upper.resize(0);
  return qp;
}

std::string to_string(QpStatus status) {
  switch (status) {
    case QpStatus::Optimal:
      return "Optimal";
    case QpStatus::Infeasible:
      return "Infeasible";
    case QpStatus::NotConvex:
      return "NotConvex";
    case QpStatus::MaxIterations:
      return "MaxIterations";
  }
  return "Unknown";
}

QpSolution solve_qp(const QpProblem& problem, const QpOptions& options) {
  const Eigen::Index n = problem.num_variables();
  if (problem.hessian.rows() != n || problem.hessian.cols() != n) {
    throw std::invalid_argument("QP Hessian dimension mismatch");
  }
  if (problem.num_constraints() > 0 &&
      (problem.constraints.cols() != n ||
       problem.constraint_lower.size() != problem.num_constraints() ||
       problem.constraint_upper.size() != problem.num_constraints())) {
    throw std::invalid_argument("QP constraint dimension mismatch");
  }
  ActiveSetSolver solver(problem, options);
  return solver.solve();
}

double qp_kkt_residual(const QpProblem& problem, const QpSolution& solution) {
  const Eigen::VectorXd& x = solution.x;
  const Eigen::Index n = x.size();
  Eigen::VectorXd stationarity = problem.hessian * x + problem.gradient +
                                 solution.bound_multipliers;
  if (problem.num_constraints() > 0) {
    stationarity += problem.constraints.transpose() * solution.constraint_multipliers;
  }
  double res = stationarity.lpNorm<Eigen::Infinity>();

  auto side_residual = [&](double value, double lo, double hi, double mult) {
    double r = 0.0;
    if (std::isfinite(lo)) r = std::max(r, lo - value);
    if (std::isfinite(hi)) r = std::max(r, value - hi);
    // Sign and complementarity of the multiplier.
    if (mult > 0.0) r = std::max(r, std::isfinite(hi) ? mult * std::abs(hi - value) : mult);
    if (mult < 0.0) r = std::max(r, std::isfinite(lo) ? -mult * std::abs(value - lo) : -mult);
    return r;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = problem.lower.size() == n ? problem.lower(i) : -kInf;
    const double hi = problem.upper.size() == n ? problem.upper(i) : kInf;
    res = std::max(res, side_residual(x(i), lo, hi, solution.bound_multipliers(i)));
  }
  for (Eigen::Index i = 0; i < problem.num_constraints(); ++i) {
    const double value = problem.constraints.row(i).dot(x);
    res = std::max(res, side_residual(value, problem.constraint_lower(i),
                                      problem.constraint_upper(i),
                                      solution.constraint_multipliers(i)));
  }
  return res;
}

}  // namespace ellmpc
