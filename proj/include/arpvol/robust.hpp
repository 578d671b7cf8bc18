// Adaptive robust estimation of the integrated volatility matrix: the
// bounded influence function psi_alpha, tail-index estimation from one-step
// returns, truncation-level rules, and the ARP / URP / PRVM estimators with
// noise bias correction.
#pragma once

#include <Eigen/Dense>

#include "arpvol/preavg.hpp"
#include "arpvol/sync.hpp"

namespace arpvol {

// Parameters of the truncation function for a tail index alpha in (1, 2]:
//   c_alpha = max{(alpha-1)/alpha, sqrt((2-alpha)/alpha)}
//   t_alpha = (1/(alpha c_alpha))^{1/(alpha-1)}
struct PsiParams {
  double alpha = 2.0;
  double c_alpha = 0.5;
  double t_alpha = 1.0;

  explicit PsiParams(double alpha_in);
  // Sup of |psi| = |log(1 - t_alpha + c_alpha t_alpha^alpha)|.
  double bound() const;
};

// Odd, non-decreasing, bounded truncation function:
//   psi(x) = -log(1 - x + c_alpha x^alpha)     for 0 <= x <= t_alpha
//   psi(x) = psi(t_alpha)                      for x >= t_alpha
// and psi(-x) = -psi(x).
double psi(double x, const PsiParams& params);

// E|Z|^{2a} for standard normal Z, via the log-gamma function.
double normal_abs_moment(double a);

// Per-asset tail indices alpha_i and the pairwise combination
// alpha_ij = min(2, 2 alpha_i alpha_j / (alpha_i + alpha_j)).
struct TailIndices {
  Eigen::VectorXd alpha_i;
  Eigen::MatrixXd alpha_ij;
  double c1 = 5.0;
  double c2 = 2.0;

  static TailIndices universal(int p);  // all alpha_i = 2
};

Eigen::MatrixXd combine_tail_indices(const Eigen::VectorXd& alpha_i);

// Smallest a on the grid {1 + step, 1 + 2 step, ..., c1} whose standardized
// empirical 2a-th moment exceeds c2 * E|Z|^{2a}; c1 if none does.
double estimate_tail_index(const Eigen::VectorXd& returns, double c1 = 5.0,
                           double c2 = 2.0, double grid_step = 0.01);
TailIndices estimate_tail_indices(const SyncGrid& grid, double c1 = 5.0,
                                  double c2 = 2.0, double grid_step = 0.01);

// Truncation levels
//   theta_ij     = c (K log p / ((a-1) c_a S_ij (n-K)))^{1/a}
//   theta_rho,ij = c (  log p / ((a-1) c_a S_rho,ij (n-1)))^{1/a}
// with a = alpha_ij and S the mean absolute a-th moments of the panels.
struct ThetaPair {
  Eigen::MatrixXd theta;
  Eigen::MatrixXd theta_rho;
};
ThetaPair choose_theta(const QuadPanel& panel, const TailIndices& tails,
                       double c, int p_for_log);

enum class Method { ARP, URP, PRVM };
const char* method_name(Method m);
Method parse_method(const std::string& name);

struct RobustEstimate {
  Eigen::MatrixXd T_hat;      // truncated mean of Q
  Eigen::MatrixXd rho_hat;    // noise bias estimate
  Eigen::MatrixXd gamma_hat;  // T_hat - rho_hat
  Eigen::MatrixXd theta;
  Eigen::MatrixXd theta_rho;
  Method method = Method::ARP;
};

// (1/(m theta)) sum_k psi(theta q_k); the building block of T_hat.
double truncated_mean(const Eigen::VectorXd& q, double theta,
                      const PsiParams& params);

// ARP uses the supplied tail indices; URP substitutes alpha_ij = 2 (the
// supplied theta must already be built from universal tails); PRVM uses the
// identity in place of psi and ignores theta entirely.
RobustEstimate robust_estimate(const QuadPanel& panel,
                               const TailIndices& tails,
                               const ThetaPair& theta, Method method);

// One-call pipeline: kernel -> panel -> tails -> theta -> estimate.
struct EstimateOptions {
  Method method = Method::ARP;
  double c = 0.15;
  double c1 = 5.0;
  double c2 = 2.0;
  double kernel_ck = 1.0;
  double alpha_grid_step = 0.01;
  int p_for_log = 0;  // 0: use max(p, 2)
  PairSelection pairs = PairSelection::all();
};
struct EstimateResult {
  RobustEstimate estimate;
  TailIndices tails;
  Kernel kernel;
  int n = 0;
};
EstimateResult estimate_volatility(const SyncGrid& grid,
                                   const EstimateOptions& opt);

}  // namespace arpvol
