// Synchronization of asynchronous tick data onto a common sampling grid:
// refresh-time and previous-tick schemes.
#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "arpvol/tick_data.hpp"

namespace arpvol {

// A generalized sampling grid tau_0 < ... < tau_n together with, for each
// asset i and grid slot k, the selected observation time tau_{i,k} and its
// log-price. Slot 0 holds each asset's most recent observation at or before
// tau_0; for k >= 1 the selected observation lies in (tau_{k-1}, tau_k]
// whenever the scheme can guarantee it (refresh time always can).
struct SyncGrid {
  Eigen::VectorXd tau;         // n + 1 grid times
  Eigen::MatrixXd sel_times;   // p x (n + 1)
  Eigen::MatrixXd sel_prices;  // p x (n + 1)
  std::vector<int> asset_ids;  // p

  int n() const { return static_cast<int>(tau.size()) - 1; }
  int p() const { return static_cast<int>(sel_times.rows()); }

  // True iff every asset's selected time falls inside (tau_{k-1}, tau_k]
  // for every k >= 1.
  bool satisfies_generalized_sampling(double eps = 0.0) const;
};

// Which observation to select inside each refresh interval.
enum class TickChoice { Last, First };

// tau_0 is the first time every asset has at least one observation; each
// subsequent tau is the first time every asset has traded again. The grid
// stops when some asset runs out of observations.
SyncGrid refresh_time_sync(const std::vector<TickSeries>& series,
                           TickChoice choice = TickChoice::Last);

// Selects each asset's most recent observation at or before every grid
// point. Grid points preceding some asset's first observation are dropped
// from the front.
SyncGrid previous_tick_sync(const std::vector<TickSeries>& series,
                            const std::vector<double>& grid);

// points equally spaced times spanning [begin, end].
std::vector<double> uniform_grid(int points, double begin = 0.0,
                                 double end = 1.0);

// Debug export, one row per (k, asset): k,tau,asset_id,tau_ik,y
void write_sync_csv(const std::string& path, const SyncGrid& grid);

}  // namespace arpvol
