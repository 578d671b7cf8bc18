// Pre-averaged returns Z_i(tau_k), their quadratic products Q_ij(tau_k) and
// the quadratic one-step return variables Q_rho,ij(tau_k), plus the weight
// kernel constants phi and zeta.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

#include "arpvol/sync.hpp"

namespace arpvol {

// Pre-averaging weight kernel tabulated at l/K for l = 0..K.
//   phi  = (1/K) * sum_{l=0}^{K-1} g(l/K)^2
//   zeta = sum_{l=0}^{K-1} {g(l/K) - g((l+1)/K)}^2
struct Kernel {
  int K = 0;
  Eigen::VectorXd weights;  // K + 1 entries
  double phi = 0.0;
  double zeta = 0.0;

  // g(x) = min(x, 1 - x). Weight numerators are exact integers over K, so
  // phi and zeta are computed from integer sums with a single division.
  static Kernel triangular(int K);
  // Arbitrary weight function with g(0) = g(1) = 0.
  static Kernel from_function(int K, const std::function<double(double)>& g);
};

// K = floor(ck * sqrt(n)) with the triangular kernel.
Kernel default_kernel(int n, double ck = 1.0);

// Z(i, k-1) = sum_{l=0}^{K-1} g(l/K) {Y_i(tau_{i,k+l+1}) - Y_i(tau_{i,k+l})}
// for k = 1..n-K. Requires n > K.
Eigen::MatrixXd pre_averaged_returns(const SyncGrid& grid,
                                     const Kernel& kernel);

// Which (i, j) pairs downstream consumers should fill.
struct PairSelection {
  enum class Mode { All, Diagonal, Listed };
  Mode mode = Mode::All;
  std::vector<std::pair<int, int>> listed;  // used when mode == Listed

  static PairSelection all() { return {}; }
  static PairSelection diagonal() { return {Mode::Diagonal, {}}; }
  static PairSelection list(std::vector<std::pair<int, int>> pairs) {
    return {Mode::Listed, std::move(pairs)};
  }
  // Upper-triangular (i <= j) pair list for dimension p.
  std::vector<std::pair<int, int>> expand(int p) const;
};

// Quadratic variables derived from a synchronized grid. Q values are formed
// on demand from Z and the one-step returns; the p^2 x n panel is never
// materialized, so all-pairs consumers stream one pair at a time.
struct QuadPanel {
  Eigen::MatrixXd Z;     // p x (n-K), pre-averaged returns
  Eigen::MatrixXd dY;    // p x (n-1), dY(i,k-1) = Y_i(tau_{i,k+1}) - Y_i(tau_{i,k})
  Eigen::MatrixXi same_time_count;  // p x p, sum_k 1(tau_{i,k} = tau_{j,k})
  int n = 0;
  int K = 0;
  double phi = 0.0;
  double zeta = 0.0;
  double q_scale = 0.0;  // (n-K) / (phi K)
  PairSelection pairs;

  int p() const { return static_cast<int>(Z.rows()); }
  int m() const { return static_cast<int>(Z.cols()); }       // n - K
  int m_rho() const { return static_cast<int>(dY.cols()); }  // n - 1

  // k is the 1-based grid index used throughout: 1..n-K and 1..n-1. The
  // product of the two pre-averaged returns is formed first so that the
  // result is exactly symmetric in (i, j).
  double Q(int i, int j, int k) const {
    return q_scale * (Z(i, k - 1) * Z(j, k - 1));
  }
  double Qrho(int i, int j, int k) const {
    return 0.5 * (dY(i, k - 1) * dY(j, k - 1));
  }
  Eigen::VectorXd q_pair(int i, int j) const;
  Eigen::VectorXd qrho_pair(int i, int j) const;
};

QuadPanel quad_panel(const SyncGrid& grid, const Kernel& kernel,
                     PairSelection pairs = PairSelection::all());

// Optional debug dump of Z and Q(i,i,.) rows.
void write_preavg_csv(const std::string& path, const QuadPanel& panel);

}  // namespace arpvol
