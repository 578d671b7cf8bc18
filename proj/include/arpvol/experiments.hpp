// Monte Carlo experiment drivers: tail-index accuracy tables, estimation
// error curves across methods and sample sizes, day-ahead portfolio risk
// comparisons, and convergence-rate slope fits. Desk-scale defaults; full
// scale reachable through the options.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arpvol/evaluate.hpp"
#include "arpvol/poet.hpp"
#include "arpvol/robust.hpp"
#include "arpvol/simulate.hpp"

namespace arpvol {

struct ExperimentOptions {
  int p = 50;
  int r = 3;
  int reps = 100;
  std::vector<int> n_all_grid = {1000, 2000, 4000};
  TailMode tail_mode = TailMode::Hetero;
  std::uint64_t seed = 1;
  double c = 0.2;  // truncation-level constant used in simulations
  double kernel_ck = 1.0;
  int poet_rank = 3;
  Thresholding thresholding = Thresholding::Hard;
  // Simulation comparisons use the Frobenius projection: both modes minimize
  // the spectral distance to the cone, but the shift inflates the whole
  // diagonal by |lambda_min| and that floor dominates every error norm at
  // noisy sample sizes.
  PsdMode psd = PsdMode::FrobeniusClip;
  int varpi_count = 25;
  std::vector<Method> methods = {Method::ARP, Method::URP, Method::PRVM};
};

// Replication r of an experiment uses a seed derived from (seed, r), so
// partial grids and method subsets see identical market paths.

struct TailMseRow {
  int n_all = 0;
  double mse = 0.0;  // mean over reps and pairs of (est - true)^2
};
std::vector<TailMseRow> tail_index_mse(const ExperimentOptions& opt);

// Per-method, per-sample-size error norms of the regularized estimates
// against the true integrated covariance, one entry per replication.
// inverse_spectral compares inverses; near-singular estimates receive a
// small ridge first, counted in ridge_repairs.
struct MethodNorms {
  Method method = Method::ARP;
  int n_all = 0;
  std::vector<NormReport> reports;
  std::vector<double> inverse_spectral;
  int ridge_repairs = 0;
};
std::vector<MethodNorms> estimation_error_experiment(
    const ExperimentOptions& opt);

// Day-ahead out-of-sample portfolio risk: weights from day d's regularized
// estimate, realized volatility from day d+1's grid portfolio returns.
struct PortfolioCell {
  Method method = Method::ARP;
  int day = 0;  // the day whose estimate sets the weights
  double c0 = 1.0;
  double risk = 0.0;
};
std::vector<PortfolioCell> portfolio_experiment(
    const ExperimentOptions& opt, const std::vector<double>& c0_grid,
    int days);

// Square root of the realized variance of grid portfolio log-returns; the
// grid has `intervals` equal steps covering the day.
double realized_portfolio_risk(const std::vector<TickSeries>& ticks,
                               const Eigen::VectorXd& weights, int intervals);

struct RateExperimentResult {
  std::vector<int> n_grid;
  std::vector<double> rmse;
  double slope = 0.0;
};
// Single-asset, jump-free, Gaussian configuration; RMSE of the estimated
// integrated variance per sample size, then a log-log slope fit.
RateExperimentResult rate_experiment(Method method,
                                     const std::vector<int>& n_grid, int reps,
                                     std::uint64_t seed, double c = 0.2,
                                     double kernel_ck = 1.0);

void write_tail_mse_csv(const std::string& path,
                        const std::vector<TailMseRow>& rows);
void write_method_norms_csv(const std::string& path,
                            const std::vector<MethodNorms>& rows);
void write_portfolio_csv(const std::string& path,
                         const std::vector<PortfolioCell>& cells);
void write_rate_csv(const std::string& path, const RateExperimentResult& r);

}  // namespace arpvol
