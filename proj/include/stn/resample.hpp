#pragma once

#include <span>
#include <vector>

#include "stn/signal.hpp"

namespace stn {

/// Band-limited sample-rate conversion with a Kaiser-windowed sinc.
std::vector<double> resample(std::span<const double> x, double from_rate, double to_rate);

Signal resample(const Signal& signal, int to_rate);

}  // namespace stn
