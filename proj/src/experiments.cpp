#include "arpvol/experiments.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "arpvol/rng.hpp"
#include "arpvol/sync.hpp"

namespace arpvol {

namespace {

std::uint64_t rep_seed(std::uint64_t master, int n_all, int rep) {
  const std::uint64_t index =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n_all)) << 32) ^
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(rep));
  return derive_seed(master, purpose::replication, index);
}

SimConfig base_config(const ExperimentOptions& opt, int n_all) {
  SimConfig cfg;
  cfg.p = opt.p;
  cfg.r = opt.r;
  cfg.n_all = n_all;
  cfg.tail_mode = opt.tail_mode;
  return cfg;
}

// True pairwise indices implied by the drawn degrees of freedom; infinite
// df (gaussian mode) caps at the estimator's own ceiling so both sides of
// the comparison saturate identically.
Eigen::MatrixXd true_alpha_matrix(const Eigen::VectorXd& df, double cap) {
  Eigen::VectorXd alpha(df.size());
  for (Eigen::Index i = 0; i < df.size(); ++i) {
    alpha(i) = std::isfinite(df(i)) ? std::min(df(i) / 2.0, cap) : cap;
  }
  return combine_tail_indices(alpha);
}

// The inverse-error comparison and the portfolio solver need a strictly
// positive definite input; a spectral-shift projection can leave the
// smallest eigenvalue at exactly zero. The ridge is relative to the top
// eigenvalue so the result clears inversion tolerances.
Eigen::MatrixXd spd_floor(const Eigen::MatrixXd& m) {
  const SymmetricEigen eig = symmetric_eigen(m);
  const double lambda_max = std::abs(eig.values(0));
  const double lambda_min = eig.values(eig.values.size() - 1);
  const double ridge = 1e-6 * std::max(lambda_max, 1e-300);
  if (lambda_min > ridge) return m;
  return m + (ridge - std::min(lambda_min, 0.0)) *
                 Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

double spectral_norm(const Eigen::MatrixXd& m) {
  const SymmetricEigen eig = symmetric_eigen(m);
  return std::max(std::abs(eig.values(0)),
                  std::abs(eig.values(eig.values.size() - 1)));
}

}  // namespace

std::vector<TailMseRow> tail_index_mse(const ExperimentOptions& opt) {
  std::vector<TailMseRow> rows;
  for (const int n_all : opt.n_all_grid) {
    double acc = 0.0;
    std::size_t count = 0;
    for (int rep = 0; rep < opt.reps; ++rep) {
      SimConfig cfg = base_config(opt, n_all);
      cfg.seed = rep_seed(opt.seed, n_all, rep);
      const SimTruth truth = simulate(cfg);
      const SyncGrid grid = refresh_time_sync(truth.ticks);
      const TailIndices tails = estimate_tail_indices(grid);
      const Eigen::MatrixXd alpha_true =
          true_alpha_matrix(truth.df, tails.c1);
      for (int i = 0; i < opt.p; ++i) {
        for (int j = i; j < opt.p; ++j) {
          const double d = tails.alpha_ij(i, j) - alpha_true(i, j);
          acc += d * d;
          ++count;
        }
      }
    }
    rows.push_back({n_all, acc / static_cast<double>(count)});
  }
  return rows;
}

std::vector<MethodNorms> estimation_error_experiment(
    const ExperimentOptions& opt) {
  std::vector<MethodNorms> out;
  for (const int n_all : opt.n_all_grid) {
    std::vector<MethodNorms> rows(opt.methods.size());
    for (std::size_t m = 0; m < opt.methods.size(); ++m) {
      rows[m].method = opt.methods[m];
      rows[m].n_all = n_all;
    }
    for (int rep = 0; rep < opt.reps; ++rep) {
      SimConfig cfg = base_config(opt, n_all);
      cfg.seed = rep_seed(opt.seed, n_all, rep);
      const SimTruth truth = simulate(cfg);
      const SyncGrid grid = refresh_time_sync(truth.ticks);
      const Eigen::MatrixXd truth_inv =
          symmetric_eigen(truth.gamma_true).vectors *
          symmetric_eigen(truth.gamma_true)
              .values.cwiseInverse()
              .asDiagonal() *
          symmetric_eigen(truth.gamma_true).vectors.transpose();
      for (std::size_t m = 0; m < opt.methods.size(); ++m) {
        EstimateOptions eopt;
        eopt.method = opt.methods[m];
        eopt.c = opt.c;
        eopt.kernel_ck = opt.kernel_ck;
        const EstimateResult est = estimate_volatility(grid, eopt);

        PoetOptions popt;
        popt.rank = opt.poet_rank;
        popt.thresholding = opt.thresholding;
        popt.psd = opt.psd;
        const std::vector<double> vgrid =
            varpi_grid(1e-3, 1.5, opt.varpi_count);
        popt.varpi = choose_varpi_oracle(est.estimate.gamma_hat,
                                         truth.gamma_true, popt, vgrid)
                         .varpi;
        const PoetDecomposition dec =
            poet_estimate(est.estimate.gamma_hat, popt);

        rows[m].reports.push_back(norms(dec.gamma_poet, truth.gamma_true));
        Eigen::MatrixXd inv;
        try {
          inv = poet_inverse(dec);
        } catch (const std::runtime_error&) {
          PoetDecomposition fixed = dec;
          fixed.gamma_poet = spd_floor(dec.gamma_poet);
          inv = poet_inverse(fixed);
          ++rows[m].ridge_repairs;
        }
        rows[m].inverse_spectral.push_back(spectral_norm(inv - truth_inv));
      }
    }
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

double realized_portfolio_risk(const std::vector<TickSeries>& ticks,
                               const Eigen::VectorXd& weights, int intervals) {
  if (intervals < 1) {
    throw std::invalid_argument("portfolio risk: need at least 1 interval");
  }
  if (static_cast<int>(ticks.size()) != weights.size()) {
    throw std::invalid_argument("portfolio risk: weight count mismatch");
  }
  const SyncGrid grid =
      previous_tick_sync(ticks, uniform_grid(intervals + 1));
  double rv = 0.0;
  for (int k = 1; k <= grid.n(); ++k) {
    const double ret = weights.dot(grid.sel_prices.col(k) -
                                   grid.sel_prices.col(k - 1));
    rv += ret * ret;
  }
  return std::sqrt(rv);
}

std::vector<PortfolioCell> portfolio_experiment(
    const ExperimentOptions& opt, const std::vector<double>& c0_grid,
    int days) {
  if (days < 1) throw std::invalid_argument("portfolio experiment: days < 1");
  std::vector<PortfolioCell> cells;
  // Day d supplies the weights, day d+1 the realized returns.
  std::vector<SimTruth> market(static_cast<std::size_t>(days) + 1);
  for (int d = 0; d <= days; ++d) {
    SimConfig cfg = base_config(opt, opt.n_all_grid.front());
    cfg.seed = rep_seed(opt.seed, cfg.n_all, d);
    market[static_cast<std::size_t>(d)] = simulate(cfg);
  }
  for (int d = 0; d < days; ++d) {
    const SimTruth& today = market[static_cast<std::size_t>(d)];
    const SimTruth& tomorrow = market[static_cast<std::size_t>(d) + 1];
    const SyncGrid grid = refresh_time_sync(today.ticks);
    for (const Method method : opt.methods) {
      EstimateOptions eopt;
      eopt.method = method;
      eopt.c = opt.c;
      eopt.kernel_ck = opt.kernel_ck;
      const EstimateResult est = estimate_volatility(grid, eopt);
      PoetOptions popt;
      popt.rank = opt.poet_rank;
      popt.thresholding = opt.thresholding;
      popt.psd = opt.psd;
      const std::vector<double> vgrid = varpi_grid(1e-3, 1.5, opt.varpi_count);
      popt.varpi = choose_varpi_oracle(est.estimate.gamma_hat,
                                       today.gamma_true, popt, vgrid)
                       .varpi;
      const PoetDecomposition dec = poet_estimate(est.estimate.gamma_hat, popt);
      const Eigen::MatrixXd gamma_pd = spd_floor(dec.gamma_poet);
      for (const double c0 : c0_grid) {
        const PortfolioSolution sol = min_variance_portfolio(gamma_pd, c0);
        PortfolioCell cell;
        cell.method = method;
        cell.day = d;
        cell.c0 = c0;
        cell.risk = realized_portfolio_risk(tomorrow.ticks, sol.weights, 39);
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

RateExperimentResult rate_experiment(Method method,
                                     const std::vector<int>& n_grid, int reps,
                                     std::uint64_t seed, double c,
                                     double kernel_ck) {
  if (reps < 2) throw std::invalid_argument("rate experiment: reps < 2");
  RateExperimentResult out;
  out.n_grid = n_grid;
  for (const int n_all : n_grid) {
    double sq = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      SimConfig cfg;
      cfg.p = 1;
      cfg.r = 1;
      cfg.n_all = n_all;
      cfg.tail_mode = TailMode::Gauss;
      cfg.jump_intensity = 0.0;
      cfg.w_low = 1.0;
      cfg.w_high = 1.0;
      cfg.seed = rep_seed(seed, n_all, rep);
      const SimTruth truth = simulate(cfg);
      const SyncGrid grid = refresh_time_sync(truth.ticks);
      EstimateOptions eopt;
      eopt.method = method;
      eopt.c = c;
      eopt.kernel_ck = kernel_ck;
      const EstimateResult est = estimate_volatility(grid, eopt);
      const double err =
          est.estimate.gamma_hat(0, 0) - truth.gamma_true(0, 0);
      sq += err * err;
    }
    out.rmse.push_back(std::sqrt(sq / reps));
  }
  out.slope = fit_rate_slope(out.n_grid, out.rmse).slope;
  return out;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out.precision(17);
  return out;
}

}  // namespace

void write_tail_mse_csv(const std::string& path,
                        const std::vector<TailMseRow>& rows) {
  std::ofstream out = open_csv(path);
  out << "n_all,mse\n";
  for (const auto& r : rows) out << r.n_all << ',' << r.mse << '\n';
}

void write_method_norms_csv(const std::string& path,
                            const std::vector<MethodNorms>& rows) {
  std::ofstream out = open_csv(path);
  out << "method,n_all,rep,frobenius,relative_frobenius,spectral,max,"
         "inverse_spectral\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.reports.size(); ++k) {
      const NormReport& n = r.reports[k];
      out << method_name(r.method) << ',' << r.n_all << ',' << k << ','
          << n.frobenius << ',';
      if (n.relative_frobenius) out << *n.relative_frobenius;
      out << ',' << n.spectral << ',' << n.max << ','
          << r.inverse_spectral[k] << '\n';
    }
  }
}

void write_portfolio_csv(const std::string& path,
                         const std::vector<PortfolioCell>& cells) {
  std::ofstream out = open_csv(path);
  out << "method,day,c0,risk\n";
  for (const auto& c : cells) {
    out << method_name(c.method) << ',' << c.day << ',' << c.c0 << ','
        << c.risk << '\n';
  }
}

void write_rate_csv(const std::string& path, const RateExperimentResult& r) {
  std::ofstream out = open_csv(path);
  out << "n_all,rmse\n";
  for (std::size_t k = 0; k < r.n_grid.size(); ++k) {
    out << r.n_grid[k] << ',' << r.rmse[k] << '\n';
  }
}

}  // namespace arpvol
