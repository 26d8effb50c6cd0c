#pragma once

#include <filesystem>

#include "stn/signal.hpp"

namespace stn {

// Binary matrix file, little-endian throughout:
//   uint32 rows
//   uint32 cols
//   rows * cols float32, row-major
// Used for mask dumps and CQT conditioning (rows = bins, cols = frames).

void write_matrix(const std::filesystem::path& path, const RealMatrix& m);
RealMatrix read_matrix(const std::filesystem::path& path);

}  // namespace stn
