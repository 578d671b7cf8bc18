#include "arpvol/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arpvol/poet.hpp"

namespace arpvol {

NormReport norms(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols() ||
      est.rows() != est.cols()) {
    throw std::invalid_argument("norms: dimension mismatch");
  }
  const int p = static_cast<int>(est.rows());
  const Eigen::MatrixXd diff = est - truth;
  NormReport out;
  out.frobenius = diff.norm();
  out.max = diff.cwiseAbs().maxCoeff();
  const SymmetricEigen diff_eig = symmetric_eigen(diff);
  out.spectral = std::max(std::abs(diff_eig.values(0)),
                          std::abs(diff_eig.values(p - 1)));
  const SymmetricEigen truth_eig = symmetric_eigen(truth);
  if (truth_eig.values(p - 1) > 0.0) {
    const Eigen::MatrixXd root_inv =
        truth_eig.vectors *
        truth_eig.values.array().rsqrt().matrix().asDiagonal() *
        truth_eig.vectors.transpose();
    out.relative_frobenius =
        (root_inv * diff * root_inv).norm() / std::sqrt(p);
  }
  return out;
}

double mspe(const std::vector<Eigen::MatrixXd>& series) {
  const std::size_t s = series.size();
  if (s < 2) throw std::invalid_argument("mspe: need at least 2 matrices");
  double acc = 0.0;
  for (std::size_t d = 0; d + 1 < s; ++d) {
    if (series[d].rows() != series[d + 1].rows() ||
        series[d].cols() != series[d + 1].cols()) {
      throw std::invalid_argument("mspe: dimension mismatch");
    }
    acc += (series[d] - series[d + 1]).squaredNorm();
  }
  return acc / static_cast<double>(s - 1);
}

namespace {

// Projection onto {x >= 0, sum x <= budget}: clip at zero, and if the sum
// still exceeds the budget, water-fill onto the simplex of size budget.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v,
                                       double budget) {
  Eigen::VectorXd x = v.cwiseMax(0.0);
  if (x.sum() <= budget) return x;
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double cand = (cumsum - budget) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= cand) {
      tau = cand;
      break;
    }
  }
  return (v.array() - tau).cwiseMax(0.0);
}

// Dykstra alternating projections onto the intersection of the capped
// simplex and the hyperplane a'v = 1 with a = (1,...,1,-1,...,-1).
Eigen::VectorXd project_feasible(const Eigen::VectorXd& v0, double c0) {
  const Eigen::Index d = v0.size();
  const double a_norm2 = static_cast<double>(d);  // a has entries +-1
  Eigen::VectorXd v = v0;
  Eigen::VectorXd q1 = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd q2 = Eigen::VectorXd::Zero(d);
  const Eigen::Index half = d / 2;
  auto a_dot = [&](const Eigen::VectorXd& x) {
    return x.head(half).sum() - x.tail(half).sum();
  };
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd y = project_capped_simplex(v + q1, c0);
    q1 += v - y;
    const double resid = (a_dot(y + q2) - 1.0) / a_norm2;
    Eigen::VectorXd z = y + q2;
    z.head(half).array() -= resid;
    z.tail(half).array() += resid;
    q2 += y - z;
    const double change = (z - v).lpNorm<Eigen::Infinity>();
    v = z;
    if (change < 1e-14) break;
  }
  return v;
}

// Equality-constrained refinement on the support of the projected-gradient
// solution; returns false when the KKT solve leaves the feasible set or
// fails to improve.
bool polish(const Eigen::MatrixXd& gamma, double c0, Eigen::VectorXd& w,
            double& objective) {
  const int p = static_cast<int>(gamma.rows());
  std::vector<int> support;
  for (int i = 0; i < p; ++i) {
    if (std::abs(w(i)) > 1e-9) support.push_back(i);
  }
  if (support.empty()) return false;
  const int s = static_cast<int>(support.size());
  Eigen::MatrixXd gs(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) gs(a, b) = gamma(support[a], support[b]);
  }
  Eigen::VectorXd sign(s);
  for (int a = 0; a < s; ++a) sign(a) = w(support[a]) > 0.0 ? 1.0 : -1.0;

  const bool l1_active = w.lpNorm<1>() > c0 - 1e-7;
  // When every supported weight is positive the exposure row duplicates the
  // budget row; keep a single constraint in that case.
  const bool parallel = (sign.array() > 0.0).all();
  const int m = (l1_active && !parallel) ? 2 : 1;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + m, s + m);
  kkt.topLeftCorner(s, s) = 2.0 * gs;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + m);
  kkt.block(s, 0, 1, s).setOnes();
  kkt.block(0, s, s, 1).setOnes();
  rhs(s) = 1.0;
  if (m == 2) {
    kkt.block(s + 1, 0, 1, s) = sign.transpose();
    kkt.block(0, s + 1, s, 1) = sign;
    rhs(s + 1) = c0;
  }
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  if (!sol.allFinite()) return false;

  Eigen::VectorXd w_new = Eigen::VectorXd::Zero(p);
  for (int a = 0; a < s; ++a) w_new(support[a]) = sol(a);
  const double tol = 1e-10;
  if (std::abs(w_new.sum() - 1.0) > tol) return false;
  if (w_new.lpNorm<1>() > c0 + 1e-9) return false;
  const double obj_new = w_new.dot(gamma * w_new);
  if (!(obj_new <= objective + 1e-12)) return false;
  w = w_new;
  objective = obj_new;
  return true;
}

}  // namespace

PortfolioSolution min_variance_portfolio(const Eigen::MatrixXd& gamma,
                                         double c0) {
  const int p = static_cast<int>(gamma.rows());
  if (gamma.cols() != p || p < 1) {
    throw std::invalid_argument("portfolio: gamma must be square");
  }
  if (!(c0 >= 1.0)) {
    throw std::invalid_argument(
        "portfolio: gross exposure bound below 1 is infeasible with the "
        "budget constraint");
  }
  const SymmetricEigen eig = symmetric_eigen(gamma);
  const double lambda_max = eig.values(0);
  const double lambda_min = eig.values(p - 1);
  if (!(lambda_min > 0.0)) {
    throw std::invalid_argument("portfolio: gamma must be positive definite");
  }

  const Eigen::Index d = 2 * p;
  const double step = 1.0 / (4.0 * lambda_max);
  Eigen::VectorXd v(d);
  v.head(p).setConstant(1.0 / p);
  v.tail(p).setZero();
  Eigen::VectorXd y = v;
  Eigen::VectorXd v_prev = v;
  double t_accel = 1.0;

  auto omega_of = [&](const Eigen::VectorXd& x) {
    return (x.head(p) - x.tail(p)).eval();
  };
  auto objective_of = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd w = omega_of(x);
    return w.dot(gamma * w);
  };

  double obj = objective_of(v);
  double obj_window = obj;
  int since_check = 0;
  bool converged = false;
  int iterations = 0;
  const int max_iterations = 20000;

  for (; iterations < max_iterations; ++iterations) {
    const Eigen::VectorXd gw = 2.0 * (gamma * omega_of(y));
    Eigen::VectorXd grad(d);
    grad.head(p) = gw;
    grad.tail(p) = -gw;
    const Eigen::VectorXd v_next = project_feasible(y - step * grad, c0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_accel * t_accel));
    y = v_next + ((t_accel - 1.0) / t_next) * (v_next - v);
    v_prev = v;
    v = v_next;
    t_accel = t_next;
    obj = objective_of(v);

    // Fixed-point residual of the unaccelerated step at v.
    const Eigen::VectorXd gv = 2.0 * (gamma * omega_of(v));
    Eigen::VectorXd grad_v(d);
    grad_v.head(p) = gv;
    grad_v.tail(p) = -gv;
    const double residual =
        (v - project_feasible(v - step * grad_v, c0)).lpNorm<Eigen::Infinity>();
    if (residual < 1e-7) {
      converged = true;
      break;
    }
    if (++since_check >= 50) {
      const double rel =
          std::abs(obj_window - obj) / std::max(std::abs(obj), 1e-300);
      if (rel < 1e-10) {
        converged = true;
        break;
      }
      obj_window = obj;
      since_check = 0;
    }
  }

  // Long and short legs never both need to be active for the same asset.
  const Eigen::VectorXd overlap = v.head(p).cwiseMin(v.tail(p));
  v.head(p) -= overlap;
  v.tail(p) -= overlap;

  PortfolioSolution sol;
  sol.weights = omega_of(v);
  sol.objective = sol.weights.dot(gamma * sol.weights);
  sol.c0 = c0;
  sol.iterations = iterations;
  sol.converged = converged;
  polish(gamma, c0, sol.weights, sol.objective);
  sol.gross_exposure = sol.weights.lpNorm<1>();
  return sol;
}

RateSlope fit_rate_slope(const std::vector<int>& n_grid,
                         const std::vector<double>& rmse) {
  if (n_grid.size() != rmse.size() || n_grid.size() < 2) {
    throw std::invalid_argument("rate slope: need matching grids, size >= 2");
  }
  const int m = static_cast<int>(n_grid.size());
  RateSlope out;
  out.log_n.resize(m);
  out.log_rmse.resize(m);
  for (int k = 0; k < m; ++k) {
    if (n_grid[static_cast<std::size_t>(k)] < 2 ||
        !(rmse[static_cast<std::size_t>(k)] > 0.0)) {
      throw std::invalid_argument("rate slope: need n >= 2 and rmse > 0");
    }
    out.log_n(k) = std::log(static_cast<double>(n_grid[static_cast<std::size_t>(k)]));
    out.log_rmse(k) = std::log(rmse[static_cast<std::size_t>(k)]);
  }
  const double xbar = out.log_n.mean();
  const double ybar = out.log_rmse.mean();
  const Eigen::VectorXd xc = out.log_n.array() - xbar;
  const Eigen::VectorXd yc = out.log_rmse.array() - ybar;
  out.slope = xc.dot(yc) / xc.squaredNorm();
  return out;
}

}  // namespace arpvol
