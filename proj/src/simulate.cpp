#include "arpvol/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "arpvol/rng.hpp"

namespace arpvol {

const char* tail_mode_name(TailMode m) {
  switch (m) {
    case TailMode::Hetero: return "hetero";
    case TailMode::Homo: return "homo";
    case TailMode::Gauss: return "gauss";
  }
  return "?";
}

TailMode parse_tail_mode(const std::string& name) {
  if (name == "hetero") return TailMode::Hetero;
  if (name == "homo") return TailMode::Homo;
  if (name == "gauss") return TailMode::Gauss;
  throw std::invalid_argument("unknown tail mode '" + name +
                              "' (expected hetero, homo, or gauss)");
}

void SimConfig::validate() const {
  if (p < 1) throw std::invalid_argument("simulate: p must be >= 1");
  if (r < 1) throw std::invalid_argument("simulate: r must be >= 1");
  if (n_all < 100) throw std::invalid_argument("simulate: n_all must be >= 100");
  if (!(jump_intensity >= 0.0) || !(jump_sd_mult >= 0.0) ||
      !(noise_sd_mult >= 0.0)) {
    throw std::invalid_argument("simulate: intensities and multipliers must "
                                "be non-negative");
  }
  if (!(w_low > 0.0 && w_low <= w_high && w_high <= 1.0)) {
    throw std::invalid_argument("simulate: need 0 < w_low <= w_high <= 1");
  }
  if (!(loading_sd >= 0.0)) {
    throw std::invalid_argument("simulate: loading_sd must be >= 0");
  }
}

namespace {

constexpr double kVarFloor = 1e-8;

std::vector<double> shared_grid(const SimConfig& cfg) {
  std::mt19937_64 gen = make_stream(cfg.seed, purpose::obs_times);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> t(static_cast<std::size_t>(cfg.n_all) + 1);
  t.front() = 0.0;
  for (int l = 1; l < cfg.n_all; ++l) {
    t[static_cast<std::size_t>(l)] = unif(gen);
  }
  t.back() = 1.0;
  std::sort(t.begin() + 1, t.end() - 1);
  return t;
}

Eigen::VectorXd draw_w(const SimConfig& cfg) {
  std::mt19937_64 gen = make_stream(cfg.seed, purpose::obs_w);
  std::uniform_real_distribution<double> unif(cfg.w_low, cfg.w_high);
  Eigen::VectorXd w(cfg.p);
  for (int i = 0; i < cfg.p; ++i) w(i) = unif(gen);
  return w;
}

Eigen::VectorXd draw_df(const SimConfig& cfg) {
  Eigen::VectorXd df(cfg.p);
  switch (cfg.tail_mode) {
    case TailMode::Hetero: {
      std::mt19937_64 gen = make_stream(cfg.seed, purpose::df);
      std::uniform_real_distribution<double> unif(2.5, 4.0);
      for (int i = 0; i < cfg.p; ++i) df(i) = unif(gen);
      break;
    }
    case TailMode::Homo:
      df.setConstant(5.0);
      break;
    case TailMode::Gauss:
      df.setConstant(std::numeric_limits<double>::infinity());
      break;
  }
  return df;
}

// Interior grid points are kept with probability w_i; both endpoints are
// always observed so every asset has a price at 0 and 1.
std::vector<std::vector<char>> draw_keep_masks(const SimConfig& cfg,
                                               const Eigen::VectorXd& w) {
  std::vector<std::vector<char>> keep(static_cast<std::size_t>(cfg.p));
  for (int i = 0; i < cfg.p; ++i) {
    std::mt19937_64 gen = make_stream(cfg.seed, purpose::obs_keep,
                                      static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto& m = keep[static_cast<std::size_t>(i)];
    m.assign(static_cast<std::size_t>(cfg.n_all) + 1, 0);
    m.front() = 1;
    m.back() = 1;
    for (int l = 1; l < cfg.n_all; ++l) {
      m[static_cast<std::size_t>(l)] = unif(gen) < w(i) ? 1 : 0;
    }
  }
  return keep;
}

// Standard normal draws, one stream per (purpose, index).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t purpose_id,
               std::uint64_t index = 0)
      : gen_(make_stream(seed, purpose_id, index)) {}
  double operator()() { return normal_(gen_); }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

// |t_df| has infinite draws t with the standard library for df = inf paths
// handled by the normal branch, so callers pass is_gauss explicitly.
class HeavyStream {
 public:
  HeavyStream(std::uint64_t seed, std::uint64_t purpose_id,
              std::uint64_t index, double df, bool is_gauss)
      : gen_(make_stream(seed, purpose_id, index)),
        t_(is_gauss ? 1.0 : df),
        is_gauss_(is_gauss) {}
  double operator()() { return is_gauss_ ? normal_(gen_) : t_(gen_); }

 private:
  std::mt19937_64 gen_;
  std::student_t_distribution<double> t_;
  std::normal_distribution<double> normal_;
  bool is_gauss_;
};

struct VolPath {
  // Base variance path on the shared grid (one value per grid point) from
  // the family this asset cycles onto; the caller applies tail scaling.
  static Eigen::VectorXd base(const SimConfig& cfg, int family,
                              const std::vector<double>& t,
                              NormalStream& own,
                              const Eigen::VectorXd* price_z) {
    const SvParams& sv = cfg.sv;
    const int N = cfg.n_all;
    Eigen::VectorXd v(N + 1);
    auto reflect = [](double x) {
      return x < kVarFloor ? 2.0 * kVarFloor - x : x;
    };
    switch (family) {
      case 0: {  // geometric OU on the log variance
        double x = sv.gou_mean;
        v(0) = std::exp(x);
        for (int l = 1; l <= N; ++l) {
          const double dt = t[l] - t[l - 1];
          x += sv.gou_rate * (sv.gou_mean - x) * dt +
               sv.gou_vol * std::sqrt(dt) * own();
          v(l) = std::exp(x);
        }
        break;
      }
      case 1: {  // sum of two square-root diffusions
        double c1 = sv.cir_mean, c2 = sv.cir_mean;
        v(0) = c1 + c2;
        for (int l = 1; l <= N; ++l) {
          const double dt = t[l] - t[l - 1];
          const double sdt = std::sqrt(dt);
          c1 = reflect(c1 + sv.cir_rate * (sv.cir_mean - c1) * dt +
                       sv.cir_vol * std::sqrt(c1) * sdt * own());
          c2 = reflect(c2 + sv.cir_rate * (sv.cir_mean - c2) * dt +
                       sv.cir_vol * std::sqrt(c2) * sdt * own());
          v(l) = c1 + c2;
        }
        break;
      }
      case 2: {  // GARCH diffusion limit
        double s = sv.garch_mean;
        v(0) = s;
        for (int l = 1; l <= N; ++l) {
          const double dt = t[l] - t[l - 1];
          s = reflect(s + sv.garch_rate * (sv.garch_mean - s) * dt +
                      sv.garch_vol * s * std::sqrt(dt) * own());
          v(l) = s;
        }
        break;
      }
      default: {  // two-factor log-linear with leverage
        double f1 = 0.0, f2 = 0.0;
        const double rho = sv.loglin_leverage;
        const double resid = std::sqrt(1.0 - rho * rho);
        v(0) = std::exp(sv.loglin_const);
        for (int l = 1; l <= N; ++l) {
          const double dt = t[l] - t[l - 1];
          const double sdt = std::sqrt(dt);
          const double zp = price_z ? (*price_z)(l - 1) : 0.0;
          const double z1 = rho * zp + resid * own();
          const double z2 = rho * zp + resid * own();
          f1 += -sv.loglin_f1_rate * f1 * dt + sv.loglin_f1_vol * sdt * z1;
          f2 += -sv.loglin_f2_rate * f2 * dt + sv.loglin_f2_vol * sdt * z2;
          v(l) = std::exp(sv.loglin_const + f1 + 0.5 * f2);
        }
        break;
      }
    }
    return v;
  }
};

}  // namespace

std::vector<std::vector<double>> sample_observation_times(
    const SimConfig& cfg) {
  cfg.validate();
  const std::vector<double> t = shared_grid(cfg);
  const Eigen::VectorXd w = draw_w(cfg);
  const auto keep = draw_keep_masks(cfg, w);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(cfg.p));
  for (int i = 0; i < cfg.p; ++i) {
    auto& times = out[static_cast<std::size_t>(i)];
    for (std::size_t l = 0; l < t.size(); ++l) {
      if (keep[static_cast<std::size_t>(i)][l]) times.push_back(t[l]);
    }
  }
  return out;
}

SimTruth simulate(const SimConfig& cfg) {
  cfg.validate();
  const int P = cfg.p;
  const int R = cfg.r;
  const int N = cfg.n_all;
  const bool gauss = cfg.tail_mode == TailMode::Gauss;

  const std::vector<double> t = shared_grid(cfg);
  SimTruth truth;
  truth.r = R;
  truth.w = draw_w(cfg);
  truth.df = draw_df(cfg);
  const auto keep = draw_keep_masks(cfg, truth.w);

  // Price Brownian increments in standardized form; shared by the price
  // paths, the correlation driver, and the leverage terms.
  Eigen::MatrixXd price_z(P, N);
  for (int i = 0; i < P; ++i) {
    NormalStream z(cfg.seed, purpose::price_bm, static_cast<std::uint64_t>(i));
    for (int l = 0; l < N; ++l) price_z(i, l) = z();
  }

  // Scaled diagonal variance paths.
  Eigen::MatrixXd var(P, N + 1);
  for (int i = 0; i < P; ++i) {
    NormalStream own(cfg.seed, purpose::vol, static_cast<std::uint64_t>(i));
    const Eigen::VectorXd zrow = price_z.row(i).transpose();
    Eigen::VectorXd base = VolPath::base(cfg, i % 4, t, own, &zrow);
    HeavyStream scale(cfg.seed, purpose::vol_scale,
                      static_cast<std::uint64_t>(i), truth.df(i), gauss);
    for (int l = 0; l <= N; ++l) {
      var(i, l) = (1.0 + std::abs(scale())) * base(l);
    }
  }

  // Correlation driver kappa(t) = tanh(u(t) / 4) through the composite
  // Brownian motion sqrt(0.96) W0 - 0.2 sum_i W_i / sqrt(p).
  Eigen::VectorXd kappa(N + 1);
  {
    NormalStream z0(cfg.seed, purpose::kappa_bm);
    const double load = 0.2 / std::sqrt(static_cast<double>(P));
    double u = cfg.sv.u_mean;
    kappa(0) = std::tanh(u / 4.0);
    for (int l = 1; l <= N; ++l) {
      const double dt = t[l] - t[l - 1];
      const double zk =
          std::sqrt(0.96) * z0() - load * price_z.col(l - 1).sum();
      u += cfg.sv.u_rate * (cfg.sv.u_mean - u) * dt +
           cfg.sv.u_vol * u * std::sqrt(dt) * zk;
      kappa(l) = std::tanh(u / 4.0);
    }
  }

  // Factor volatilities (diagonal) and loadings.
  Eigen::MatrixXd fvar(R, N + 1);
  for (int k = 0; k < R; ++k) {
    NormalStream own(cfg.seed, purpose::factor_vol,
                     static_cast<std::uint64_t>(k));
    Eigen::VectorXd base = VolPath::base(cfg, 0, t, own, nullptr);
    HeavyStream scale(cfg.seed, purpose::factor_scale,
                      static_cast<std::uint64_t>(k), truth.df(k % P), gauss);
    for (int l = 0; l <= N; ++l) {
      fvar(k, l) = (1.0 + std::abs(scale())) * base(l);
    }
  }
  Eigen::MatrixXd B(R, P);
  {
    NormalStream z(cfg.seed, purpose::loadings);
    for (int k = 0; k < R; ++k) {
      for (int i = 0; i < P; ++i) B(k, i) = cfg.loading_sd * z();
    }
  }

  NormalStream factor_z(cfg.seed, purpose::factor_bm);

  // Euler steps of the continuous log-price, plus the exact compensator of
  // the simulated covariance. The idiosyncratic shock with the target
  // correlation kappa^{|i-j|} is built by the first-order recursion
  // e_i = kappa e_{i-1} + sqrt(1-kappa^2) z_i, which is the Cholesky factor
  // of that correlation matrix applied to z; it cannot produce a non-PSD
  // matrix, so repairs only track floored variances or a clamped kappa.
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(P, N + 1);
  truth.gamma_true = Eigen::MatrixXd::Zero(P, P);
  truth.cholesky_repairs = 0;
  Eigen::VectorXd fvar_integral = Eigen::VectorXd::Zero(R);
  Eigen::VectorXd sd(P), kpow(P);
  for (int l = 1; l <= N; ++l) {
    const double dt = t[l] - t[l - 1];
    const double sdt = std::sqrt(dt);

    double kap = kappa(l - 1);
    if (!(std::abs(kap) < 1.0)) {
      kap = std::copysign(1.0 - 1e-12, kap);
      ++truth.cholesky_repairs;
    }
    for (int i = 0; i < P; ++i) {
      double v = var(i, l - 1);
      if (!(v >= 1e-12)) {
        v = 1e-12;
        ++truth.cholesky_repairs;
      }
      sd(i) = std::sqrt(v);
    }

    // gamma(t_{l-1}), idiosyncratic block.
    kpow(0) = 1.0;
    for (int d = 1; d < P; ++d) kpow(d) = kpow(d - 1) * kap;
    for (int i = 0; i < P; ++i) {
      for (int j = i; j < P; ++j) {
        const double g = kpow(j - i) * sd(i) * sd(j) * dt;
        truth.gamma_true(i, j) += g;
        if (i != j) truth.gamma_true(j, i) += g;
      }
    }
    for (int k = 0; k < R; ++k) fvar_integral(k) += fvar(k, l - 1) * dt;

    // Idiosyncratic shocks via the correlation recursion.
    const double resid = std::sqrt(1.0 - kap * kap);
    double e = price_z(0, l - 1);
    X(0, l) = X(0, l - 1) + cfg.drift * dt + sd(0) * sdt * e;
    for (int i = 1; i < P; ++i) {
      e = kap * e + resid * price_z(i, l - 1);
      X(i, l) = X(i, l - 1) + cfg.drift * dt + sd(i) * sdt * e;
    }
    // Common factor shocks.
    for (int k = 0; k < R; ++k) {
      const double shock = std::sqrt(fvar(k, l - 1)) * sdt * factor_z();
      for (int i = 0; i < P; ++i) X(i, l) += B(k, i) * shock;
    }
  }
  Eigen::MatrixXd factor_part =
      B.transpose() * fvar_integral.asDiagonal() * B;
  truth.gamma_true += 0.5 * (factor_part + factor_part.transpose());

  // Jumps and noise scale to the realized integrated variances.
  truth.jump_counts = Eigen::VectorXi::Zero(P);
  truth.noise_sd.resize(P);
  truth.ticks.resize(static_cast<std::size_t>(P));
  for (int i = 0; i < P; ++i) {
    const double gii = std::max(truth.gamma_true(i, i), 0.0);
    const double t_sd =
        gauss ? 1.0 : std::sqrt(truth.df(i) / (truth.df(i) - 2.0));

    std::vector<double> jtimes;
    std::vector<double> jsizes;
    if (cfg.jump_intensity > 0.0) {
      std::mt19937_64 gen =
          make_stream(cfg.seed, purpose::jumps, static_cast<std::uint64_t>(i));
      std::poisson_distribution<int> pois(cfg.jump_intensity);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::student_t_distribution<double> tdist(gauss ? 1.0 : truth.df(i));
      std::normal_distribution<double> ndist;
      const int count = pois(gen);
      truth.jump_counts(i) = count;
      const double target = cfg.jump_sd_mult * std::sqrt(gii);
      jtimes.resize(static_cast<std::size_t>(count));
      jsizes.resize(static_cast<std::size_t>(count));
      for (int j = 0; j < count; ++j) jtimes[static_cast<std::size_t>(j)] = unif(gen);
      for (int j = 0; j < count; ++j) {
        const double draw = gauss ? ndist(gen) : tdist(gen);
        jsizes[static_cast<std::size_t>(j)] = draw * target / t_sd;
      }
      // Sort event times, keeping each size with its event.
      std::vector<std::size_t> order(jtimes.size());
      for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return jtimes[a] < jtimes[b];
      });
      std::vector<double> st(jtimes.size()), ss(jtimes.size());
      for (std::size_t j = 0; j < order.size(); ++j) {
        st[j] = jtimes[order[j]];
        ss[j] = jsizes[order[j]];
      }
      jtimes.swap(st);
      jsizes.swap(ss);
    }

    const double noise_target = cfg.noise_sd_mult * std::sqrt(gii);
    truth.noise_sd(i) = noise_target;
    HeavyStream noise(cfg.seed, purpose::noise, static_cast<std::uint64_t>(i),
                      truth.df(i), gauss);

    TickSeries& s = truth.ticks[static_cast<std::size_t>(i)];
    s.asset_id = i;
    std::size_t jnext = 0;
    double jsum = 0.0;
    for (int l = 0; l <= N; ++l) {
      if (!keep[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)]) {
        continue;
      }
      while (jnext < jtimes.size() && jtimes[jnext] <= t[static_cast<std::size_t>(l)]) {
        jsum += jsizes[jnext];
        ++jnext;
      }
      double y = X(i, l) + jsum;
      if (noise_target > 0.0) y += noise() * noise_target / t_sd;
      s.times.push_back(t[static_cast<std::size_t>(l)]);
      s.log_prices.push_back(y);
    }
  }
  return truth;
}

void write_sim_manifest(const std::string& path, const SimConfig& cfg,
                        const SimTruth& truth) {
  nlohmann::json j;
  j["config"] = {
      {"p", cfg.p},
      {"r", cfg.r},
      {"n_all", cfg.n_all},
      {"tail_mode", tail_mode_name(cfg.tail_mode)},
      {"seed", cfg.seed},
      {"jump_intensity", cfg.jump_intensity},
      {"jump_sd_mult", cfg.jump_sd_mult},
      {"noise_sd_mult", cfg.noise_sd_mult},
      {"w_low", cfg.w_low},
      {"w_high", cfg.w_high},
      {"drift", cfg.drift},
      {"loading_sd", cfg.loading_sd},
  };
  j["cholesky_repairs"] = truth.cholesky_repairs;
  nlohmann::json assets = nlohmann::json::array();
  for (int i = 0; i < cfg.p; ++i) {
    nlohmann::json a;
    a["asset_id"] = i;
    if (std::isfinite(truth.df(i))) {
      a["df"] = truth.df(i);
    } else {
      a["df"] = nullptr;  // gaussian mode
    }
    a["w"] = truth.w(i);
    a["jump_count"] = truth.jump_counts(i);
    a["noise_sd"] = truth.noise_sd(i);
    a["observations"] = truth.ticks[static_cast<std::size_t>(i)].size();
    assets.push_back(a);
  }
  j["assets"] = assets;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace arpvol
