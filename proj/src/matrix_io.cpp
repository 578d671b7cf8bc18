#include "arpvol/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arpvol {

namespace {

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_int(const std::string& s, int& out) {
  try {
    std::size_t pos = 0;
    out = std::stoi(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) io_fail(path, "write failed");
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(f, &pos));
        if (pos != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        io_fail(path, "line " + std::to_string(lineno) +
                          ": not a number: '" + f + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      io_fail(path, "line " + std::to_string(lineno) + ": expected " +
                        std::to_string(rows.front().size()) + " columns, got " +
                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) io_fail(path, "empty matrix");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

std::vector<int> load_sectors(const std::string& path, int expected_p) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open");
  std::vector<int> sectors;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    const std::string& raw =
        fields.size() >= 2 ? fields[1] : fields.front();
    int sector = 0;
    if (!parse_int(raw, sector)) {
      if (sectors.empty()) continue;  // header line
      io_fail(path, "line " + std::to_string(lineno) +
                        ": not an integer sector id: '" + raw + "'");
    }
    sectors.push_back(sector);
  }
  if (static_cast<int>(sectors.size()) != expected_p) {
    io_fail(path, "expected " + std::to_string(expected_p) +
                      " sector rows, got " + std::to_string(sectors.size()));
  }
  return sectors;
}

}  // namespace arpvol
