#include "arpvol/sync.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace arpvol {

bool SyncGrid::satisfies_generalized_sampling(double eps) const {
  for (int k = 1; k <= n(); ++k) {
    for (int i = 0; i < p(); ++i) {
      const double t = sel_times(i, k);
      if (!(t > tau(k - 1) - eps && t <= tau(k) + eps)) return false;
    }
  }
  return true;
}

namespace {

void check_series(const std::vector<TickSeries>& series) {
  if (series.empty()) throw std::invalid_argument("sync: no assets");
  for (const TickSeries& s : series) {
    if (s.times.empty()) {
      throw std::invalid_argument("sync: asset " + std::to_string(s.asset_id) +
                                  " has no observations");
    }
    if (s.times.size() != s.log_prices.size()) {
      throw std::invalid_argument("sync: times/log_prices length mismatch");
    }
  }
}

SyncGrid from_columns(const std::vector<TickSeries>& series,
                      const std::vector<double>& tau,
                      const std::vector<std::vector<double>>& times,
                      const std::vector<std::vector<double>>& prices) {
  const int p = static_cast<int>(series.size());
  const int cols = static_cast<int>(tau.size());
  SyncGrid g;
  g.tau = Eigen::Map<const Eigen::VectorXd>(tau.data(), cols);
  g.sel_times.resize(p, cols);
  g.sel_prices.resize(p, cols);
  g.asset_ids.resize(p);
  for (int i = 0; i < p; ++i) {
    g.asset_ids[i] = series[i].asset_id;
    for (int k = 0; k < cols; ++k) {
      g.sel_times(i, k) = times[i][k];
      g.sel_prices(i, k) = prices[i][k];
    }
  }
  return g;
}

}  // namespace

SyncGrid refresh_time_sync(const std::vector<TickSeries>& series,
                           TickChoice choice) {
  check_series(series);
  const int p = static_cast<int>(series.size());

  double tau0 = series[0].times.front();
  for (const TickSeries& s : series) {
    tau0 = std::max(tau0, s.times.front());
  }

  std::vector<double> tau{tau0};
  std::vector<std::vector<double>> times(p), prices(p);
  // next[i] is the first observation index strictly after the current tau.
  std::vector<std::size_t> next(p);
  for (int i = 0; i < p; ++i) {
    const auto& t = series[i].times;
    std::size_t j = 0;
    while (j < t.size() && t[j] <= tau0) ++j;
    times[i].push_back(t[j - 1]);  // most recent observation <= tau0
    prices[i].push_back(series[i].log_prices[j - 1]);
    next[i] = j;
  }

  while (true) {
    double tau_next = -1.0;
    bool alive = true;
    for (int i = 0; i < p; ++i) {
      if (next[i] >= series[i].times.size()) {
        alive = false;
        break;
      }
      tau_next = std::max(tau_next, series[i].times[next[i]]);
    }
    if (!alive) break;
    for (int i = 0; i < p; ++i) {
      const auto& t = series[i].times;
      std::size_t j = next[i];
      if (choice == TickChoice::First) {
        times[i].push_back(t[j]);
        prices[i].push_back(series[i].log_prices[j]);
      }
      while (j < t.size() && t[j] <= tau_next) ++j;
      if (choice == TickChoice::Last) {
        times[i].push_back(t[j - 1]);
        prices[i].push_back(series[i].log_prices[j - 1]);
      }
      next[i] = j;
    }
    tau.push_back(tau_next);
  }

  if (tau.size() < 2) {
    throw std::runtime_error(
        "refresh time: insufficient overlap between assets (zero intervals)");
  }
  return from_columns(series, tau, times, prices);
}

SyncGrid previous_tick_sync(const std::vector<TickSeries>& series,
                            const std::vector<double>& grid) {
  check_series(series);
  if (grid.empty()) throw std::invalid_argument("previous tick: empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("previous tick: grid not increasing");
    }
  }
  const int p = static_cast<int>(series.size());

  // Every asset must have traded by the first kept grid point.
  double first_obs_max = series[0].times.front();
  for (const TickSeries& s : series) {
    first_obs_max = std::max(first_obs_max, s.times.front());
  }
  std::size_t start = 0;
  while (start < grid.size() && grid[start] < first_obs_max) ++start;
  if (start == grid.size()) {
    throw std::runtime_error(
        "previous tick: no grid point is covered by all assets");
  }

  std::vector<double> tau(grid.begin() + static_cast<long>(start), grid.end());
  std::vector<std::vector<double>> times(p), prices(p);
  for (int i = 0; i < p; ++i) {
    const auto& t = series[i].times;
    std::size_t j = 0;
    times[i].reserve(tau.size());
    prices[i].reserve(tau.size());
    for (const double g : tau) {
      while (j < t.size() && t[j] <= g) ++j;
      times[i].push_back(t[j - 1]);
      prices[i].push_back(series[i].log_prices[j - 1]);
    }
  }
  return from_columns(series, tau, times, prices);
}

std::vector<double> uniform_grid(int points, double begin, double end) {
  if (points < 1) throw std::invalid_argument("uniform grid: points < 1");
  if (!(end > begin)) throw std::invalid_argument("uniform grid: end <= begin");
  std::vector<double> g(static_cast<std::size_t>(points));
  if (points == 1) {
    g[0] = begin;
    return g;
  }
  for (int j = 0; j < points; ++j) {
    g[static_cast<std::size_t>(j)] =
        begin + (end - begin) * static_cast<double>(j) /
                    static_cast<double>(points - 1);
  }
  g.back() = end;
  return g;
}

void write_sync_csv(const std::string& path, const SyncGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sync file: " + path);
  out.precision(17);
  out << "k,tau,asset_id,tau_ik,y\n";
  for (int k = 0; k <= grid.n(); ++k) {
    for (int i = 0; i < grid.p(); ++i) {
      out << k << ',' << grid.tau(k) << ',' << grid.asset_ids[i] << ','
          << grid.sel_times(i, k) << ',' << grid.sel_prices(i, k) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace arpvol
