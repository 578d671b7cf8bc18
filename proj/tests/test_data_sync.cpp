#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "arpvol/sync.hpp"
#include "arpvol/tick_data.hpp"

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/arpvol_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

arpvol::TickSeries series(int id, std::vector<double> times,
                          std::vector<double> prices) {
  arpvol::TickSeries s;
  s.asset_id = id;
  s.times = std::move(times);
  s.log_prices = std::move(prices);
  return s;
}

}  // namespace

TEST_CASE("csv parse produces one series per asset") {
  const auto path = temp_file("parse.csv",
                              "asset_id,time,log_price\n"
                              "0,0.1,1.0\n0,0.2,1.1\n0,0.3,1.2\n"
                              "1,0.15,2.0\n1,0.25,2.1\n1,0.35,2.2\n");
  const auto ticks = arpvol::load_ticks(path, arpvol::TimeUnit::fraction());
  REQUIRE(ticks.size() == 2);
  CHECK(ticks[0].times.size() == 3);
  CHECK(ticks[1].times.size() == 3);
  CHECK(ticks[0].log_prices[2] == 1.2);
  CHECK(ticks[1].times[0] == 0.15);
}

TEST_CASE("empty csv reports no observations") {
  const auto path = temp_file("empty.csv", "asset_id,time,log_price\n");
  CHECK_THROWS_WITH_AS(
      arpvol::load_ticks(path, arpvol::TimeUnit::fraction()),
      doctest::Contains("no observations"), std::runtime_error);
}

TEST_CASE("seconds time unit rescales affinely to the unit interval") {
  const auto path = temp_file("seconds.csv",
                              "asset_id,time,log_price\n"
                              "0,34200,1.0\n0,45900,1.1\n0,57600,1.2\n");
  const auto ticks =
      arpvol::load_ticks(path, arpvol::TimeUnit::parse("seconds:34200:57600"));
  REQUIRE(ticks.size() == 1);
  CHECK(ticks[0].times[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ticks[0].times[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ticks[0].times[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::is_sorted(ticks[0].times.begin(), ticks[0].times.end()));
}

TEST_CASE("duplicate timestamps keep the last row") {
  const auto path = temp_file("dup.csv",
                              "asset_id,time,log_price\n"
                              "0,0.1,1.0\n0,0.2,7.0\n0,0.2,9.0\n0,0.3,1.2\n");
  const auto ticks = arpvol::load_ticks(path, arpvol::TimeUnit::fraction());
  REQUIRE(ticks[0].times.size() == 3);
  CHECK(ticks[0].log_prices[1] == 9.0);
}

TEST_CASE("parse errors carry line numbers") {
  const auto path = temp_file("bad.csv",
                              "asset_id,time,log_price\n"
                              "0,0.1,1.0\n0,oops,1.1\n");
  CHECK_THROWS_WITH_AS(arpvol::load_ticks(path, arpvol::TimeUnit::fraction()),
                       doctest::Contains(":3:"), std::runtime_error);
}

TEST_CASE("backwards time within an asset is an error") {
  const auto path = temp_file("back.csv",
                              "asset_id,time,log_price\n"
                              "0,0.3,1.0\n0,0.2,1.1\n");
  CHECK_THROWS_AS(arpvol::load_ticks(path, arpvol::TimeUnit::fraction()),
                  std::runtime_error);
}

TEST_CASE("synchronous data is its own refresh grid") {
  std::vector<double> times;
  std::vector<double> prices;
  for (int k = 1; k <= 10; ++k) {
    times.push_back(0.1 * k);
    prices.push_back(static_cast<double>(k));
  }
  const std::vector<arpvol::TickSeries> ticks = {series(0, times, prices),
                                                 series(1, times, prices)};
  const arpvol::SyncGrid grid = arpvol::refresh_time_sync(ticks);
  CHECK(grid.n() == 9);
  for (int k = 0; k <= grid.n(); ++k) {
    CHECK(grid.tau(k) == times[static_cast<std::size_t>(k)]);
    CHECK(grid.sel_times(0, k) == grid.sel_times(1, k));
    CHECK(grid.sel_times(0, k) == times[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("refresh recursion hand trace on two asynchronous assets") {
  const std::vector<arpvol::TickSeries> ticks = {
      series(0, {0.1, 0.2, 0.3}, {1.0, 2.0, 3.0}),
      series(1, {0.15, 0.35}, {10.0, 20.0})};
  const arpvol::SyncGrid grid = arpvol::refresh_time_sync(ticks);
  // Sync points 0.15 (both assets seen) and 0.35; asset 0 selects the
  // observations 0.1 then 0.3, asset 1 selects 0.15 then 0.35.
  REQUIRE(grid.n() == 1);
  CHECK(grid.tau(0) == 0.15);
  CHECK(grid.tau(1) == 0.35);
  CHECK(grid.sel_times(0, 0) == 0.1);
  CHECK(grid.sel_times(0, 1) == 0.3);
  CHECK(grid.sel_times(1, 0) == 0.15);
  CHECK(grid.sel_times(1, 1) == 0.35);
  CHECK(grid.sel_prices(0, 1) == 3.0);
  CHECK(grid.sel_prices(1, 1) == 20.0);
}

TEST_CASE("first tick selection picks the earliest observation per interval") {
  const std::vector<arpvol::TickSeries> ticks = {
      series(0, {0.1, 0.2, 0.3}, {1.0, 2.0, 3.0}),
      series(1, {0.15, 0.35}, {10.0, 20.0})};
  const arpvol::SyncGrid grid =
      arpvol::refresh_time_sync(ticks, arpvol::TickChoice::First);
  REQUIRE(grid.n() == 1);
  CHECK(grid.sel_times(0, 1) == 0.2);
  CHECK(grid.sel_times(1, 1) == 0.35);
  CHECK(grid.satisfies_generalized_sampling());
}

TEST_CASE("refresh grid is a subset of observation times and valid sampling") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<arpvol::TickSeries> ticks;
  std::vector<double> all_times;
  for (int i = 0; i < 5; ++i) {
    std::vector<double> t;
    for (int k = 0; k < 60; ++k) t.push_back(unif(rng));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::vector<double> y(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) y[k] = unif(rng);
    all_times.insert(all_times.end(), t.begin(), t.end());
    ticks.push_back(series(i, t, y));
  }
  const arpvol::SyncGrid grid = arpvol::refresh_time_sync(ticks);
  REQUIRE(grid.n() >= 10);
  CHECK(grid.satisfies_generalized_sampling());
  std::sort(all_times.begin(), all_times.end());
  for (int k = 0; k <= grid.n(); ++k) {
    CHECK(std::binary_search(all_times.begin(), all_times.end(), grid.tau(k)));
    for (int i = 0; i < grid.p(); ++i) {
      if (k >= 1) {
        CHECK(grid.sel_times(i, k) > grid.tau(k - 1));
        CHECK(grid.sel_times(i, k) <= grid.tau(k));
      }
    }
  }

  // Permutation invariance in asset order (up to the matching row swap).
  std::vector<arpvol::TickSeries> shuffled = {ticks[3], ticks[0], ticks[4],
                                              ticks[1], ticks[2]};
  const arpvol::SyncGrid grid2 = arpvol::refresh_time_sync(shuffled);
  REQUIRE(grid2.n() == grid.n());
  for (int k = 0; k <= grid.n(); ++k) {
    CHECK(grid2.tau(k) == grid.tau(k));
    CHECK(grid2.sel_prices(1, k) == grid.sel_prices(0, k));
    CHECK(grid2.sel_prices(0, k) == grid.sel_prices(3, k));
  }
}

TEST_CASE("single asset refresh grid equals its own observation times") {
  const std::vector<arpvol::TickSeries> ticks = {
      series(0, {0.05, 0.2, 0.4, 0.9}, {1.0, 2.0, 3.0, 4.0})};
  const arpvol::SyncGrid grid = arpvol::refresh_time_sync(ticks);
  REQUIRE(grid.n() == 3);
  CHECK(grid.tau(0) == 0.05);
  CHECK(grid.tau(3) == 0.9);
  for (int k = 0; k <= 3; ++k) CHECK(grid.sel_times(0, k) == grid.tau(k));
}

TEST_CASE("insufficient overlap is an error") {
  const std::vector<arpvol::TickSeries> ticks = {
      series(0, {0.1, 0.2}, {1.0, 2.0}), series(1, {0.8, 0.9}, {1.0, 2.0})};
  CHECK_THROWS_WITH_AS(arpvol::refresh_time_sync(ticks),
                       doctest::Contains("insufficient overlap"),
                       std::runtime_error);
}

TEST_CASE("previous tick selects the most recent observation per grid point") {
  const std::vector<arpvol::TickSeries> ticks = {
      series(0, {0.05, 0.55}, {1.0, 2.0})};
  const arpvol::SyncGrid grid =
      arpvol::previous_tick_sync(ticks, {0.5, 1.0});
  REQUIRE(grid.n() == 1);
  CHECK(grid.sel_times(0, 0) == 0.05);
  CHECK(grid.sel_times(0, 1) == 0.55);
  CHECK(grid.sel_prices(0, 1) == 2.0);
}

TEST_CASE("previous tick on exact observation grid is the identity") {
  std::vector<double> t, y;
  for (int k = 0; k < 10; ++k) {
    t.push_back(0.1 * k + 0.05);
    y.push_back(static_cast<double>(k));
  }
  const arpvol::SyncGrid grid =
      arpvol::previous_tick_sync({series(0, t, y)}, t);
  REQUIRE(grid.n() == 9);
  for (int k = 0; k <= 9; ++k) {
    CHECK(grid.sel_times(0, k) == t[static_cast<std::size_t>(k)]);
    CHECK(grid.sel_prices(0, k) == y[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("previous tick drops grid points before the first observation") {
  const std::vector<arpvol::TickSeries> ticks = {
      series(0, {0.3, 0.6}, {1.0, 2.0})};
  const arpvol::SyncGrid grid =
      arpvol::previous_tick_sync(ticks, {0.1, 0.2, 0.5, 1.0});
  REQUIRE(grid.n() == 1);
  CHECK(grid.tau(0) == 0.5);
  CHECK(grid.tau(1) == 1.0);
}

TEST_CASE("one minute style grid yields the expected interval count") {
  std::vector<double> t, y;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(k / 2000.0);
    y.push_back(std::sin(k * 0.01));
  }
  const arpvol::SyncGrid grid =
      arpvol::previous_tick_sync({series(0, t, y)}, arpvol::uniform_grid(390));
  CHECK(grid.n() == 389);
}

TEST_CASE("uniform grid covers the unit interval with exact endpoints") {
  const std::vector<double> g = arpvol::uniform_grid(40);
  REQUIRE(g.size() == 40);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] > g[k - 1]);
}

TEST_CASE("tick csv round trip preserves values") {
  const std::vector<arpvol::TickSeries> ticks = {
      series(0, {0.125, 0.25, 0.875}, {1.5, -2.25, 0.0078125}),
      series(1, {0.1, 0.9}, {3.5, -1.125})};
  const std::string path = "/tmp/arpvol_test_roundtrip.csv";
  arpvol::write_ticks_csv(path, ticks);
  const auto back = arpvol::load_ticks(path, arpvol::TimeUnit::fraction());
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    REQUIRE(back[i].times.size() == ticks[i].times.size());
    for (std::size_t k = 0; k < back[i].times.size(); ++k) {
      CHECK(back[i].times[k] == ticks[i].times[k]);
      CHECK(back[i].log_prices[k] == ticks[i].log_prices[k]);
    }
  }
}
