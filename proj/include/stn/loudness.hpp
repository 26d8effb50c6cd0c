#pragma once

#include "stn/signal.hpp"

namespace stn {

/// Integrated loudness in LUFS: K-weighting, 400 ms blocks with 75 % overlap,
/// absolute gate at -70 LUFS and relative gate 10 LU below the absolute-gated
/// mean. Left and right channels have unit weight. Throws UnmeasurableLoudness
/// when no block survives gating (digital silence, or shorter than one block).
double integrated_loudness(const Signal& signal);

/// Pure gain change so that integrated_loudness(result) == target_lufs.
Signal loudness_normalize(const Signal& signal, double target_lufs);

}  // namespace stn
