// Deterministic 3-asset asynchronous tick fixture shared by the
// pre-averaging and estimator regression tests. The frozen expected values
// in those tests were produced by an independent reimplementation of the
// formulas (numpy), run once and pinned.
#pragma once

#include <cmath>
#include <vector>

#include "arpvol/tick_data.hpp"

namespace arpvol_test {

inline std::vector<arpvol::TickSeries> fixture_ticks() {
  std::vector<arpvol::TickSeries> ticks(3);
  for (int k = 1; k <= 40; ++k) {
    ticks[0].times.push_back(k / 40.0);
    ticks[0].log_prices.push_back(std::sin(3.0 * k) / 10.0 + k / 80.0);
  }
  for (int k = 1; k <= 50; ++k) {
    ticks[1].times.push_back(k / 50.0);
    ticks[1].log_prices.push_back(std::cos(2.0 * k) / 12.0);
  }
  for (int k = 1; k <= 45; ++k) {
    ticks[2].times.push_back(k / 45.0);
    ticks[2].log_prices.push_back(std::sin(5.0 * k + 1.0) / 15.0 - k / 90.0);
  }
  for (int i = 0; i < 3; ++i) ticks[static_cast<std::size_t>(i)].asset_id = i;
  return ticks;
}

}  // namespace arpvol_test
