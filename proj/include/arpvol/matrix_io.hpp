#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arpvol {

// Dense matrix as headerless CSV, one row per line, full double precision.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd load_matrix_csv(const std::string& path);

// Sector membership CSV with rows `asset_id,sector_id` (header optional);
// row order maps to matrix row order. A single-column file of sector ids
// is also accepted.
std::vector<int> load_sectors(const std::string& path, int expected_p);

}  // namespace arpvol
