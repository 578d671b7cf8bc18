// Tick-level input data: per-asset irregular (time, log-price) observations
// on the unit interval, plus CSV ingestion with optional clock rescaling.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arpvol {

struct TickSeries {
  int asset_id = 0;
  std::vector<double> times;       // strictly increasing, all in [0, 1]
  std::vector<double> log_prices;  // same length as times

  std::size_t size() const { return times.size(); }
};

// Maps raw CSV clock values to fractions of the unit interval.
struct TimeUnit {
  enum class Kind { Fraction, Seconds };
  Kind kind = Kind::Fraction;
  double day_start = 0.0;  // used when kind == Seconds
  double day_end = 1.0;

  static TimeUnit fraction() { return {}; }
  static TimeUnit seconds(double start, double end);
  // Accepts "fraction" or "seconds:<start>:<end>".
  static TimeUnit parse(const std::string& flag);

  double to_fraction(double raw) const;
};

// Reads `asset_id,time,log_price` rows (header required) into one sorted
// TickSeries per asset. Duplicate (asset, time) rows keep the last row;
// a time that moves backwards within an asset is an error.
std::vector<TickSeries> load_ticks(const std::string& path,
                                   const TimeUnit& unit = TimeUnit::fraction());
std::vector<TickSeries> parse_ticks(std::istream& in, const TimeUnit& unit,
                                    const std::string& stream_name);

void write_ticks_csv(const std::string& path,
                     const std::vector<TickSeries>& series);

}  // namespace arpvol
