#include "arpvol/poet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arpvol {

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eigen: matrix must be square");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("eigen: non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigen: decomposition failed");
  }
  const int p = static_cast<int>(m.rows());
  SymmetricEigen out;
  out.values.resize(p);
  out.vectors.resize(p, p);
  // Eigen returns ascending order; flip to descending.
  for (int k = 0; k < p; ++k) {
    out.values(k) = solver.eigenvalues()(p - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(p - 1 - k);
  }
  return out;
}

const char* psd_mode_name(PsdMode m) {
  switch (m) {
    case PsdMode::SpectralShift: return "spectral_shift";
    case PsdMode::FrobeniusClip: return "frobenius_clip";
    case PsdMode::None: return "none";
  }
  return "?";
}

PsdMode parse_psd_mode(const std::string& name) {
  if (name == "spectral_shift") return PsdMode::SpectralShift;
  if (name == "frobenius_clip") return PsdMode::FrobeniusClip;
  if (name == "none") return PsdMode::None;
  throw std::invalid_argument("unknown psd mode '" + name + "'");
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m, PsdMode mode) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  if (mode == PsdMode::None) return sym;
  const SymmetricEigen eig = symmetric_eigen(sym);
  const double lambda_min = eig.values(eig.values.size() - 1);
  if (lambda_min >= 0.0) return sym;
  if (mode == PsdMode::SpectralShift) {
    return sym +
           (-lambda_min) * Eigen::MatrixXd::Identity(sym.rows(), sym.cols());
  }
  const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.asDiagonal() * eig.vectors.transpose();
}

const char* thresholding_name(Thresholding t) {
  switch (t) {
    case Thresholding::Hard: return "hard";
    case Thresholding::Soft: return "soft";
    case Thresholding::Sector: return "sector";
  }
  return "?";
}

Thresholding parse_thresholding(const std::string& name) {
  if (name == "hard") return Thresholding::Hard;
  if (name == "soft") return Thresholding::Soft;
  if (name == "sector") return Thresholding::Sector;
  throw std::invalid_argument("unknown thresholding '" + name + "'");
}

PoetDecomposition poet_estimate(const Eigen::MatrixXd& gamma_hat,
                                const PoetOptions& opt) {
  const int p = static_cast<int>(gamma_hat.rows());
  if (gamma_hat.cols() != p) {
    throw std::invalid_argument("poet: matrix must be square");
  }
  if (opt.rank < 1 || opt.rank >= p) {
    throw std::invalid_argument("poet: rank must satisfy 1 <= r < p");
  }
  if (!(opt.varpi >= 0.0)) {
    throw std::invalid_argument("poet: varpi must be non-negative");
  }
  if (opt.thresholding == Thresholding::Sector &&
      static_cast<int>(opt.sectors.size()) != p) {
    throw std::invalid_argument("poet: sector labels must cover every asset");
  }

  PoetDecomposition res;
  res.r = opt.rank;
  res.varpi = opt.varpi;
  const Eigen::MatrixXd input = psd_project(gamma_hat, opt.psd);
  const SymmetricEigen eig = symmetric_eigen(input);
  res.eigenvalues = eig.values;

  res.theta_hat = Eigen::MatrixXd::Zero(p, p);
  for (int k = 0; k < opt.rank; ++k) {
    res.theta_hat.noalias() +=
        eig.values(k) * eig.vectors.col(k) * eig.vectors.col(k).transpose();
  }
  res.residual = input - res.theta_hat;

  Eigen::MatrixXd thr(p, p);
  const Eigen::VectorXd diag_floor = res.residual.diagonal().cwiseMax(0.0);
  int kept = 0;
  int off_diag = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i == j) {
        thr(i, i) = diag_floor(i);
        continue;
      }
      ++off_diag;
      const double s = res.residual(i, j);
      if (opt.thresholding == Thresholding::Sector) {
        const bool same = opt.sectors[static_cast<std::size_t>(i)] ==
                          opt.sectors[static_cast<std::size_t>(j)];
        thr(i, j) = same ? s : 0.0;
        if (same) ++kept;
        continue;
      }
      const double level = opt.varpi * std::sqrt(diag_floor(i) * diag_floor(j));
      if (std::abs(s) >= level) {
        ++kept;
        thr(i, j) = opt.thresholding == Thresholding::Hard
                        ? s
                        : s - (s > 0.0 ? level : -level);
      } else {
        thr(i, j) = 0.0;
      }
    }
  }
  res.sigma_hat = thr;
  res.kept_fraction =
      off_diag == 0 ? 1.0 : static_cast<double>(kept) / off_diag;
  res.gamma_poet = psd_project(res.theta_hat + thr, opt.psd);
  return res;
}

Eigen::MatrixXd poet_inverse(const PoetDecomposition& dec, double rel_tol) {
  const SymmetricEigen eig = symmetric_eigen(dec.gamma_poet);
  const double lambda_max = eig.values(0);
  const double lambda_min = eig.values(eig.values.size() - 1);
  if (!(lambda_min > rel_tol * std::abs(lambda_max))) {
    throw std::runtime_error(
        "poet inverse: matrix is numerically singular; raise varpi or use "
        "the spectral shift projection");
  }
  return eig.vectors * eig.values.cwiseInverse().asDiagonal() *
         eig.vectors.transpose();
}

Eigen::VectorXd scree(const std::vector<Eigen::MatrixXd>& gamma_hats) {
  if (gamma_hats.empty()) throw std::invalid_argument("scree: no matrices");
  Eigen::MatrixXd sum = gamma_hats.front();
  for (std::size_t k = 1; k < gamma_hats.size(); ++k) {
    if (gamma_hats[k].rows() != sum.rows() ||
        gamma_hats[k].cols() != sum.cols()) {
      throw std::invalid_argument("scree: dimension mismatch");
    }
    sum += gamma_hats[k];
  }
  return symmetric_eigen(sum).values;
}

std::vector<double> varpi_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw std::invalid_argument("varpi grid: need 0 < lo <= hi, count >= 1");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int k = 0; k < count; ++k) {
    g[static_cast<std::size_t>(k)] = std::exp(std::log(lo) + k * step);
  }
  return g;
}

VarpiChoice choose_varpi_oracle(const Eigen::MatrixXd& gamma_hat,
                                const Eigen::MatrixXd& truth,
                                const PoetOptions& opt,
                                const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("varpi oracle: empty grid");
  VarpiChoice best;
  best.frobenius_error = std::numeric_limits<double>::infinity();
  PoetOptions local = opt;
  for (const double v : grid) {
    local.varpi = v;
    const PoetDecomposition r = poet_estimate(gamma_hat, local);
    const double err = (r.gamma_poet - truth).norm();
    if (err < best.frobenius_error) {
      best.frobenius_error = err;
      best.varpi = v;
    }
  }
  return best;
}

}  // namespace arpvol
