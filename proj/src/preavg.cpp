#include "arpvol/preavg.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace arpvol {

Kernel Kernel::triangular(int K) {
  if (K < 2) throw std::invalid_argument("kernel: K must be at least 2");
  Kernel k;
  k.K = K;
  k.weights.resize(K + 1);
  // Numerators min(l, K - l) are integers; phi and zeta reduce to integer
  // sums divided once, so zeta * K is exact for even K.
  std::int64_t phi_num = 0;
  std::int64_t zeta_count = 0;
  for (int l = 0; l <= K; ++l) {
    const std::int64_t num = std::min<std::int64_t>(l, K - l);
    k.weights(l) = static_cast<double>(num) / K;
    if (l < K) {
      phi_num += num * num;
      const std::int64_t next = std::min<std::int64_t>(l + 1, K - l - 1);
      if (next != num) ++zeta_count;
    }
  }
  const double Kd = static_cast<double>(K);
  k.phi = static_cast<double>(phi_num) / (Kd * Kd * Kd);
  k.zeta = static_cast<double>(zeta_count) / (Kd * Kd);
  return k;
}

Kernel Kernel::from_function(int K, const std::function<double(double)>& g) {
  if (K < 2) throw std::invalid_argument("kernel: K must be at least 2");
  Kernel k;
  k.K = K;
  k.weights.resize(K + 1);
  for (int l = 0; l <= K; ++l) {
    k.weights(l) = g(static_cast<double>(l) / K);
  }
  double phi = 0.0, zeta = 0.0;
  for (int l = 0; l < K; ++l) {
    phi += k.weights(l) * k.weights(l);
    const double d = k.weights(l) - k.weights(l + 1);
    zeta += d * d;
  }
  k.phi = phi / K;
  k.zeta = zeta;
  if (!(k.phi > 0.0)) {
    throw std::invalid_argument("kernel: phi must be positive");
  }
  return k;
}

Kernel default_kernel(int n, double ck) {
  if (!(ck > 0.0)) throw std::invalid_argument("kernel: ck must be positive");
  const int K =
      n > 0 ? static_cast<int>(std::floor(ck * std::sqrt(n))) : 0;
  if (K < 2) {
    throw std::invalid_argument(
        "kernel: n too small for a bandwidth of at least 2");
  }
  return Kernel::triangular(K);
}

Eigen::MatrixXd pre_averaged_returns(const SyncGrid& grid,
                                     const Kernel& kernel) {
  const int n = grid.n();
  const int K = kernel.K;
  if (n <= K) {
    throw std::invalid_argument("pre-averaging: need n > K, got n = " +
                                std::to_string(n) +
                                ", K = " + std::to_string(K));
  }
  const int p = grid.p();
  // One-step returns D(:, s) = Y(:, s+1) - Y(:, s) for s = 0..n-1.
  Eigen::MatrixXd D = grid.sel_prices.rightCols(n) - grid.sel_prices.leftCols(n);
  Eigen::MatrixXd Z(p, n - K);
  const Eigen::VectorXd w = kernel.weights.head(K);
  for (int k = 1; k <= n - K; ++k) {
    Z.col(k - 1).noalias() = D.middleCols(k, K) * w;
  }
  return Z;
}

std::vector<std::pair<int, int>> PairSelection::expand(int p) const {
  std::vector<std::pair<int, int>> out;
  switch (mode) {
    case Mode::All:
      out.reserve(static_cast<std::size_t>(p) * (p + 1) / 2);
      for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) out.emplace_back(i, j);
      }
      break;
    case Mode::Diagonal:
      out.reserve(static_cast<std::size_t>(p));
      for (int i = 0; i < p; ++i) out.emplace_back(i, i);
      break;
    case Mode::Listed:
      out.reserve(listed.size());
      for (auto [i, j] : listed) {
        if (i < 0 || j < 0 || i >= p || j >= p) {
          throw std::invalid_argument("pair selection: index out of range");
        }
        out.emplace_back(std::min(i, j), std::max(i, j));
      }
      break;
  }
  return out;
}

Eigen::VectorXd QuadPanel::q_pair(int i, int j) const {
  Eigen::VectorXd out(m());
  for (int k = 1; k <= m(); ++k) out(k - 1) = Q(i, j, k);
  return out;
}

Eigen::VectorXd QuadPanel::qrho_pair(int i, int j) const {
  Eigen::VectorXd out(m_rho());
  for (int k = 1; k <= m_rho(); ++k) out(k - 1) = Qrho(i, j, k);
  return out;
}

QuadPanel quad_panel(const SyncGrid& grid, const Kernel& kernel,
                     PairSelection pairs) {
  const int n = grid.n();
  const int p = grid.p();
  QuadPanel panel;
  panel.Z = pre_averaged_returns(grid, kernel);
  panel.dY = grid.sel_prices.middleCols(2, n - 1) -
             grid.sel_prices.middleCols(1, n - 1);
  // Counted over the n return-bearing slots k = 1..n.
  panel.same_time_count = Eigen::MatrixXi::Zero(p, p);
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        if (grid.sel_times(i, k) == grid.sel_times(j, k)) {
          panel.same_time_count(i, j) += 1;
          if (i != j) panel.same_time_count(j, i) += 1;
        }
      }
    }
  }
  panel.n = n;
  panel.K = kernel.K;
  panel.phi = kernel.phi;
  panel.zeta = kernel.zeta;
  panel.q_scale = static_cast<double>(n - kernel.K) / (kernel.phi * kernel.K);
  panel.pairs = std::move(pairs);
  return panel;
}

void write_preavg_csv(const std::string& path, const QuadPanel& panel) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write pre-averaging file: " + path);
  out.precision(17);
  out << "k,asset_index,z,q_diag\n";
  for (int k = 1; k <= panel.m(); ++k) {
    for (int i = 0; i < panel.p(); ++i) {
      out << k << ',' << i << ',' << panel.Z(i, k - 1) << ','
          << panel.Q(i, i, k) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace arpvol
