#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stn {

/// Phase vocoder geometry. The synthesis hop is fixed and the analysis hop
/// follows from alpha: analysis frame m is centered at round(m * synthesis_hop / alpha),
/// so rounding never accumulates and the long-run rate is exactly alpha.
struct PvConfig {
    std::size_t window_length = 8192;
    std::size_t synthesis_hop = 2048;

    double analysis_hop(double alpha) const { return static_cast<double>(synthesis_hop) / alpha; }

    void validate() const;
};

inline constexpr double kMinPvAlpha = 0.25;
inline constexpr double kMaxPvAlpha = 16.0;

/// round(alpha * length), the target length of every stretched path.
std::size_t stretched_length(std::size_t length, double alpha);

/// Bins whose magnitude is strictly greater than each of their (up to) four
/// nearest neighbours k-2, k-1, k+1, k+2.
std::vector<std::size_t> find_spectral_peaks(std::span<const double> magnitude);

/// For each bin, the index into peaks of the peak that owns it. Regions are
/// split at the lowest-magnitude bin between adjacent peaks; that bin goes to
/// the right-hand peak.
std::vector<std::size_t> peak_regions(std::span<const double> magnitude, std::span<const std::size_t> peaks);

/// Time-stretch by alpha with identity phase locking. Output length is
/// exactly stretched_length(x.size(), alpha).
std::vector<double> stretch_sines(std::span<const double> x, double alpha, const PvConfig& config = {});

}  // namespace stn
