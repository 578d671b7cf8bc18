// Synthetic market generator: factor plus idiosyncratic jump-diffusion
// log-prices with stochastic volatility, heavy-tailed scaling, Poisson
// jumps, asynchronous observation times, and additive observation noise,
// together with the exact integrated covariance of the continuous part.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arpvol/tick_data.hpp"

namespace arpvol {

enum class TailMode { Hetero, Homo, Gauss };
const char* tail_mode_name(TailMode m);
TailMode parse_tail_mode(const std::string& name);

// Mean-reversion / level / volatility-of-volatility triples for the four
// diagonal variance families plus the correlation driver u(t).
struct SvParams {
  double gou_rate = 0.6;  // d log s = rate (mean - log s) dt + vol dW
  double gou_mean = -0.35;
  double gou_vol = 0.25;

  double cir_rate = 0.1;  // two independent components, summed
  double cir_mean = 0.3;
  double cir_vol = 0.2;

  double garch_rate = 0.35;  // ds = rate (mean - s) dt + vol s dW
  double garch_mean = 0.2;
  double garch_vol = 0.5;

  double loglin_const = -0.3;  // log s = const + f1 + 0.5 f2
  double loglin_f1_rate = 0.1;
  double loglin_f1_vol = 0.3;
  double loglin_f2_rate = 1.0;
  double loglin_f2_vol = 0.8;
  double loglin_leverage = -0.3;  // corr of factor BMs with the price BM

  double u_rate = 0.03;  // du = rate (mean - u) dt + vol u dW_kappa
  double u_mean = 0.64;
  double u_vol = 0.118;
};

struct SimConfig {
  int p = 200;
  int r = 3;
  int n_all = 1000;
  TailMode tail_mode = TailMode::Hetero;
  std::uint64_t seed = 1;
  double jump_intensity = 5.0;
  double jump_sd_mult = 0.2;
  double noise_sd_mult = 0.1;
  double w_low = 0.8;
  double w_high = 1.0;
  double drift = 0.02;
  double loading_sd = 0.9;
  SvParams sv;

  void validate() const;  // throws std::invalid_argument
};

struct SimTruth {
  std::vector<TickSeries> ticks;   // noisy, asynchronous observations
  Eigen::MatrixXd gamma_true;      // integrated covariance, continuous part
  int r = 0;
  Eigen::VectorXd df;              // per-asset t degrees of freedom
  Eigen::VectorXd w;               // per-asset observation retention rates
  Eigen::VectorXi jump_counts;
  Eigen::VectorXd noise_sd;
  int cholesky_repairs = 0;        // instantaneous covariances floored
};

// The state processes step on the common observation grid (the sorted
// uniform draws plus both endpoints); every process and every asset reads
// from its own derived random stream, so the result is reproducible from
// the seed alone and unchanged by thread count. gamma_true is the Riemann
// sum of the instantaneous covariance over the same grid and excludes
// jumps and noise by construction.
SimTruth simulate(const SimConfig& cfg);

// Observation times only (shared grid thinned per asset), skipping price
// and volatility generation; identical to the times simulate() produces
// for the same config.
std::vector<std::vector<double>> sample_observation_times(const SimConfig& cfg);

// JSON manifest with the config, seed, and per-asset diagnostics.
void write_sim_manifest(const std::string& path, const SimConfig& cfg,
                        const SimTruth& truth);

}  // namespace arpvol
