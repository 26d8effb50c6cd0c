#pragma once

#include <cstddef>

#include "stn/signal.hpp"

namespace stn {

// Median filters over a frames x bins magnitude matrix.
//
// For a filter length L the window around index i covers
//   i - (L-1)/2  ...  i - (L-1)/2 + L - 1
// which for even L is i - L/2 + 1 ... i + L/2. Indices outside the matrix
// are replaced by the nearest edge element. For even L the lower of the two
// middle order statistics is returned.
//
// Both throw InvalidArgument when length == 0 or length > 2 * extent.

/// Along the frame (time) axis: enhances horizontal structures.
RealMatrix median_filter_time(const RealMatrix& mag, std::size_t length);

/// Along the bin (frequency) axis: enhances vertical structures.
RealMatrix median_filter_freq(const RealMatrix& mag, std::size_t length);

}  // namespace stn
