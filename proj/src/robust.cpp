#include "arpvol/robust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arpvol {

PsiParams::PsiParams(double alpha_in) : alpha(alpha_in) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("psi: tail index must lie in (1, 2], got " +
                                std::to_string(alpha_in));
  }
  c_alpha = std::max((alpha - 1.0) / alpha, std::sqrt((2.0 - alpha) / alpha));
  t_alpha = std::pow(1.0 / (alpha * c_alpha), 1.0 / (alpha - 1.0));
}

namespace {

// 1 - y + c y^alpha stays in (0, 1] on [0, t_alpha]; the log argument is
// passed to log1p as (c y^alpha - y) for accuracy near zero. bound() and
// the saturated branch of psi share this expression so the plateau value
// and the bound are the same double.
inline double psi_positive(double y, const PsiParams& ps) {
  const double pw =
      ps.alpha == 2.0 ? y * y : std::pow(y, ps.alpha);
  return -std::log1p(ps.c_alpha * pw - y);
}

}  // namespace

double PsiParams::bound() const { return psi_positive(t_alpha, *this); }

double psi(double x, const PsiParams& params) {
  const double y = std::min(std::abs(x), params.t_alpha);
  const double v = psi_positive(y, params);
  return std::signbit(x) ? -v : v;
}

double normal_abs_moment(double a) {
  return std::exp(a * std::log(2.0) + std::lgamma(a + 0.5) -
                  0.5 * std::log(M_PI));
}

TailIndices TailIndices::universal(int p) {
  TailIndices t;
  t.alpha_i = Eigen::VectorXd::Constant(p, 2.0);
  t.alpha_ij = Eigen::MatrixXd::Constant(p, p, 2.0);
  return t;
}

Eigen::MatrixXd combine_tail_indices(const Eigen::VectorXd& alpha_i) {
  const int p = static_cast<int>(alpha_i.size());
  Eigen::MatrixXd out(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      const double harmonic =
          2.0 * alpha_i(i) * alpha_i(j) / (alpha_i(i) + alpha_i(j));
      out(i, j) = out(j, i) = std::min(2.0, harmonic);
    }
  }
  return out;
}

double estimate_tail_index(const Eigen::VectorXd& returns, double c1,
                           double c2, double grid_step) {
  if (returns.size() < 3) {
    throw std::invalid_argument("tail index: need at least 3 returns");
  }
  if (!(c1 > 1.0) || !(c2 > 0.0) || !(grid_step > 0.0)) {
    throw std::invalid_argument("tail index: invalid constants");
  }
  const double m = returns.size();
  const double mean = returns.mean();
  const double sd =
      std::sqrt((returns.array() - mean).square().sum() / (m - 1.0));
  if (!(sd > 0.0)) return c1;  // constant returns carry no tail information

  // log |z_k|; zero returns contribute exp(-inf) = 0 below.
  const Eigen::ArrayXd log_abs_z =
      ((returns.array() - mean).abs() / sd).log();
  const int steps = static_cast<int>(std::round((c1 - 1.0) / grid_step));
  for (int s = 1; s <= steps; ++s) {
    const double a = 1.0 + s * grid_step;
    const double moment = (2.0 * a * log_abs_z).exp().mean();
    if (moment > c2 * normal_abs_moment(a)) return a;
  }
  return c1;
}

TailIndices estimate_tail_indices(const SyncGrid& grid, double c1, double c2,
                                  double grid_step) {
  const int p = grid.p();
  const int n = grid.n();
  if (n < 4) throw std::invalid_argument("tail index: grid too short");
  TailIndices t;
  t.c1 = c1;
  t.c2 = c2;
  t.alpha_i.resize(p);
  for (int i = 0; i < p; ++i) {
    const Eigen::VectorXd d =
        (grid.sel_prices.row(i).segment(2, n - 1) -
         grid.sel_prices.row(i).segment(1, n - 1))
            .transpose();
    t.alpha_i(i) = estimate_tail_index(d, c1, c2, grid_step);
  }
  t.alpha_ij = combine_tail_indices(t.alpha_i);
  return t;
}

namespace {

double mean_abs_pow(const Eigen::VectorXd& q, double a) {
  if (a == 2.0) return q.array().square().mean();
  return q.array().abs().pow(a).mean();
}

}  // namespace

ThetaPair choose_theta(const QuadPanel& panel, const TailIndices& tails,
                       double c, int p_for_log) {
  if (!(c > 0.0)) throw std::invalid_argument("theta: c must be positive");
  if (p_for_log < 2) {
    throw std::invalid_argument("theta: log dimension must be at least 2");
  }
  const int p = panel.p();
  const double logp = std::log(static_cast<double>(p_for_log));
  ThetaPair out;
  out.theta = Eigen::MatrixXd::Zero(p, p);
  out.theta_rho = Eigen::MatrixXd::Zero(p, p);
  for (auto [i, j] : panel.pairs.expand(p)) {
    const double a = tails.alpha_ij(i, j);
    const PsiParams ps(a);
    const double s_q = mean_abs_pow(panel.q_pair(i, j), a);
    const double s_rho = mean_abs_pow(panel.qrho_pair(i, j), a);
    if (!(s_q > 0.0) || !(s_rho > 0.0)) {
      throw std::runtime_error("theta: degenerate quadratic panel for pair (" +
                               std::to_string(i) + ", " + std::to_string(j) +
                               ")");
    }
    const double denom = (a - 1.0) * ps.c_alpha;
    out.theta(i, j) = out.theta(j, i) =
        c * std::pow(panel.K * logp / (denom * s_q * panel.m()), 1.0 / a);
    out.theta_rho(i, j) = out.theta_rho(j, i) =
        c * std::pow(logp / (denom * s_rho * panel.m_rho()), 1.0 / a);
  }
  return out;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::ARP: return "arp";
    case Method::URP: return "urp";
    case Method::PRVM: return "prvm";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "arp") return Method::ARP;
  if (name == "urp") return Method::URP;
  if (name == "prvm") return Method::PRVM;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected arp, urp, or prvm)");
}

double truncated_mean(const Eigen::VectorXd& q, double theta,
                      const PsiParams& params) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("truncated mean: theta must be positive");
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    acc += psi(theta * q(k), params);
  }
  return acc / (static_cast<double>(q.size()) * theta);
}

RobustEstimate robust_estimate(const QuadPanel& panel,
                               const TailIndices& tails,
                               const ThetaPair& theta, Method method) {
  const int p = panel.p();
  RobustEstimate est;
  est.method = method;
  est.T_hat = Eigen::MatrixXd::Zero(p, p);
  est.rho_hat = Eigen::MatrixXd::Zero(p, p);
  est.theta = theta.theta;
  est.theta_rho = theta.theta_rho;
  const double rho_scale = panel.zeta / (panel.phi * panel.K);

  const auto check_finite = [](const Eigen::VectorXd& v, int i, int j,
                               const char* what) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v(k))) {
        throw std::runtime_error(
            std::string("robust estimate: non-finite ") + what + " at (" +
            std::to_string(i) + ", " + std::to_string(j) + ", " +
            std::to_string(k + 1) + ")");
      }
    }
  };

  for (auto [i, j] : panel.pairs.expand(p)) {
    const Eigen::VectorXd q = panel.q_pair(i, j);
    const Eigen::VectorXd qrho = panel.qrho_pair(i, j);
    check_finite(q, i, j, "Q");
    check_finite(qrho, i, j, "Q_rho");
    double t_ij = 0.0, rho_ij = 0.0;
    if (method == Method::PRVM) {
      t_ij = q.mean();
      rho_ij = rho_scale * qrho.sum();
    } else {
      const double a = method == Method::URP ? 2.0 : tails.alpha_ij(i, j);
      const PsiParams ps(a);
      t_ij = truncated_mean(q, theta.theta(i, j), ps);
      const double th_rho = theta.theta_rho(i, j);
      if (!(th_rho > 0.0) || !std::isfinite(th_rho)) {
        throw std::invalid_argument("robust estimate: invalid theta_rho");
      }
      double acc = 0.0;
      for (Eigen::Index k = 0; k < qrho.size(); ++k) {
        acc += psi(th_rho * qrho(k), ps);
      }
      rho_ij = rho_scale / th_rho * acc;
    }
    est.T_hat(i, j) = est.T_hat(j, i) = t_ij;
    est.rho_hat(i, j) = est.rho_hat(j, i) = rho_ij;
  }
  est.gamma_hat = est.T_hat - est.rho_hat;
  return est;
}

EstimateResult estimate_volatility(const SyncGrid& grid,
                                   const EstimateOptions& opt) {
  const int p = grid.p();
  EstimateResult out;
  out.n = grid.n();
  out.kernel = default_kernel(out.n, opt.kernel_ck);
  const QuadPanel panel = quad_panel(grid, out.kernel, opt.pairs);
  out.tails = opt.method == Method::ARP
                  ? estimate_tail_indices(grid, opt.c1, opt.c2,
                                          opt.alpha_grid_step)
                  : TailIndices::universal(p);
  ThetaPair theta;
  if (opt.method != Method::PRVM) {
    const int p_log = opt.p_for_log > 0 ? opt.p_for_log : std::max(p, 2);
    theta = choose_theta(panel, out.tails, opt.c, p_log);
  }
  out.estimate = robust_estimate(panel, out.tails, theta, opt.method);
  return out;
}

}  // namespace arpvol
