// Low-rank plus sparse regularization of an estimated volatility matrix:
// principal components factor part, thresholded idiosyncratic part, positive
// semidefinite projection, and inversion.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arpvol {

// Eigen-decomposition of a symmetric matrix with eigenvalues sorted in
// descending order; columns of `vectors` follow the same order.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m);

enum class PsdMode { SpectralShift, FrobeniusClip, None };
const char* psd_mode_name(PsdMode m);
PsdMode parse_psd_mode(const std::string& name);

// SpectralShift adds max(0, -lambda_min) to the diagonal (a spectral-norm
// minimizer); FrobeniusClip zeroes negative eigenvalues (the nearest PSD
// matrix in Frobenius norm). Inputs are symmetrized first.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m, PsdMode mode);

enum class Thresholding { Hard, Soft, Sector };
const char* thresholding_name(Thresholding t);
Thresholding parse_thresholding(const std::string& name);

struct PoetOptions {
  int rank = 1;
  double varpi = 0.0;
  Thresholding thresholding = Thresholding::Soft;
  // Sector membership per asset; entries in the same sector are never
  // thresholded. Consulted only when thresholding == Sector.
  std::vector<int> sectors;
  PsdMode psd = PsdMode::SpectralShift;
};

struct PoetDecomposition {
  Eigen::MatrixXd theta_hat;   // rank-r principal components part
  Eigen::MatrixXd sigma_hat;   // thresholded idiosyncratic part
  Eigen::MatrixXd gamma_poet;  // theta_hat + sigma_hat, PSD-projected
  Eigen::MatrixXd residual;    // pre-threshold idiosyncratic part
  Eigen::VectorXd eigenvalues;  // of the PSD-projected input, descending
  int r = 0;
  double varpi = 0.0;
  double kept_fraction = 1.0;  // surviving off-diagonal entries
};

// Requires 1 <= rank < p. The input is symmetrized and PSD-projected, the
// top-rank eigenpairs form theta_hat, and the remainder is thresholded
// entry-wise at varpi * sqrt((s_ii v 0)(s_jj v 0)). Entries at exactly the
// threshold level survive. The diagonal is clipped at zero, never
// thresholded, and the sum is PSD-projected again.
PoetDecomposition poet_estimate(const Eigen::MatrixXd& gamma_hat,
                                const PoetOptions& opt);

// Inverse of gamma_poet via its spectral decomposition. Errors when the
// smallest eigenvalue is at most rel_tol times the largest; raising varpi
// or using the spectral shift projection restores invertibility.
Eigen::MatrixXd poet_inverse(const PoetDecomposition& dec,
                             double rel_tol = 1e-8);

// Eigenvalues of the element-wise sum of the inputs, descending; the usual
// scree table for choosing the factor rank.
Eigen::VectorXd scree(const std::vector<Eigen::MatrixXd>& gamma_hats);

// Log-spaced candidate thresholds between lo and hi inclusive.
std::vector<double> varpi_grid(double lo, double hi, int count);

// Varpi minimizing the Frobenius distance between the regularized estimate
// and a known target matrix; used in simulations where the target is the
// true integrated volatility.
struct VarpiChoice {
  double varpi = 0.0;
  double frobenius_error = 0.0;
};
VarpiChoice choose_varpi_oracle(const Eigen::MatrixXd& gamma_hat,
                                const Eigen::MatrixXd& truth,
                                const PoetOptions& opt,
                                const std::vector<double>& grid);

}  // namespace arpvol
