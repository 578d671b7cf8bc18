#include "arpvol/tick_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace arpvol {

TimeUnit TimeUnit::seconds(double start, double end) {
  if (!(end > start)) {
    throw std::invalid_argument("time unit: day_end must exceed day_start");
  }
  TimeUnit u;
  u.kind = Kind::Seconds;
  u.day_start = start;
  u.day_end = end;
  return u;
}

TimeUnit TimeUnit::parse(const std::string& flag) {
  if (flag == "fraction") return fraction();
  const std::string prefix = "seconds:";
  if (flag.rfind(prefix, 0) == 0) {
    const std::string rest = flag.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      try {
        const double start = std::stod(rest.substr(0, colon));
        const double end = std::stod(rest.substr(colon + 1));
        return seconds(start, end);
      } catch (const std::logic_error&) {
      }
    }
  }
  throw std::invalid_argument("time unit must be 'fraction' or "
                              "'seconds:<start>:<end>', got '" + flag + "'");
}

double TimeUnit::to_fraction(double raw) const {
  if (kind == Kind::Fraction) return raw;
  return (raw - day_start) / (day_end - day_start);
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void parse_fail(const std::string& name, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<TickSeries> parse_ticks(std::istream& in, const TimeUnit& unit,
                                    const std::string& stream_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(stream_name + ": empty tick input");
  }
  ++line_no;
  if (line.find("asset_id") == std::string::npos) {
    parse_fail(stream_name, line_no,
               "expected header containing 'asset_id,time,log_price'");
  }

  std::map<int, TickSeries> by_asset;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_csv_row(line);
    if (fields.size() != 3) {
      parse_fail(stream_name, line_no, "expected 3 fields, got " +
                                           std::to_string(fields.size()));
    }
    int asset = 0;
    double t = 0.0, y = 0.0;
    try {
      asset = std::stoi(fields[0]);
      t = unit.to_fraction(std::stod(fields[1]));
      y = std::stod(fields[2]);
    } catch (const std::logic_error&) {
      parse_fail(stream_name, line_no, "malformed row '" + line + "'");
    }
    if (!std::isfinite(t) || !std::isfinite(y)) {
      parse_fail(stream_name, line_no, "non-finite time or price");
    }
    if (t < 0.0 || t > 1.0) {
      parse_fail(stream_name, line_no,
                 "time " + std::to_string(t) + " outside [0, 1]");
    }
    TickSeries& s = by_asset[asset];
    s.asset_id = asset;
    if (!s.times.empty() && t < s.times.back()) {
      parse_fail(stream_name, line_no,
                 "time moves backwards for asset " + std::to_string(asset));
    }
    if (!s.times.empty() && t == s.times.back()) {
      s.log_prices.back() = y;  // duplicate timestamp keeps the last row
    } else {
      s.times.push_back(t);
      s.log_prices.push_back(y);
    }
  }
  if (by_asset.empty()) {
    throw std::runtime_error(stream_name + ": no observations");
  }

  std::vector<TickSeries> out;
  out.reserve(by_asset.size());
  for (auto& [id, s] : by_asset) out.push_back(std::move(s));
  return out;
}

std::vector<TickSeries> load_ticks(const std::string& path,
                                   const TimeUnit& unit) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tick file: " + path);
  return parse_ticks(in, unit, path);
}

void write_ticks_csv(const std::string& path,
                     const std::vector<TickSeries>& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write tick file: " + path);
  out.precision(17);
  out << "asset_id,time,log_price\n";
  for (const TickSeries& s : series) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      out << s.asset_id << ',' << s.times[k] << ',' << s.log_prices[k] << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace arpvol
