// Evaluation metrics and the gross-exposure-constrained minimum variance
// portfolio solver.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace arpvol {

struct NormReport {
  double frobenius = 0.0;
  double spectral = 0.0;
  double max = 0.0;
  // p^{-1/2} Frobenius norm of G^{-1/2} (E - G) G^{-1/2}; absent when the
  // reference matrix is not positive definite.
  std::optional<double> relative_frobenius;
};

// Error norms of est - truth. The relative norm uses the eigendecomposition
// of truth and is reported only when truth is numerically SPD.
NormReport norms(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth);

// (1/(s-1)) sum of squared Frobenius distances between consecutive
// matrices; stability proxy for a sequence of daily estimates.
double mspe(const std::vector<Eigen::MatrixXd>& series);

struct PortfolioSolution {
  Eigen::VectorXd weights;
  double objective = 0.0;       // w' Gamma w
  double gross_exposure = 0.0;  // l1 norm of weights
  double c0 = 0.0;
  int iterations = 0;
  bool converged = false;
};

// min w' Gamma w  subject to  sum w = 1  and  |w|_1 <= c0.
// Solved by variable splitting w = u - v with u, v >= 0 and accelerated
// projected gradient over the intersection of the capped simplex and the
// budget hyperplane (Dykstra alternating projections), then an active-set
// equality solve to polish the support. Requires gamma SPD and c0 >= 1.
PortfolioSolution min_variance_portfolio(const Eigen::MatrixXd& gamma,
                                         double c0);

struct RateSlope {
  double slope = 0.0;
  Eigen::VectorXd log_n;
  Eigen::VectorXd log_rmse;
};
// Least-squares slope of log(rmse) against log(n).
RateSlope fit_rate_slope(const std::vector<int>& n_grid,
                         const std::vector<double>& rmse);

}  // namespace arpvol
