#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace stn {

struct TransientConfig {
    std::size_t envelope_window = 128;
    std::size_t envelope_hop = 64;
    double median_factor = 4.0;      // threshold = max(median * factor, floor, relative)
    double floor_dbfs = -60.0;
    double relative_floor_db = -30.0;  // candidates must also reach this level relative to the strongest frame
    double extent_fraction = 0.1;    // extent ends where the envelope drops below this fraction of the peak
    double max_extent_seconds = 0.1; // on each side of the onset
    double crossfade_seconds = 0.01;
};

/// A detected transient. onset is the largest-magnitude sample inside the
/// envelope peak frame; [start, end) is the segment copied on relocation.
struct TransientEvent {
    std::size_t onset = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    double peak_energy = 0.0;  // sum of squares over the envelope peak frame
};

/// RMS over windows starting at multiples of hop; windows running past the
/// end are averaged over their in-range samples only.
std::vector<double> rms_envelope(std::span<const double> x, std::size_t window, std::size_t hop);

/// Local maxima of the RMS envelope above an adaptive threshold, taken
/// strongest first. Returns non-overlapping events sorted by onset.
std::vector<TransientEvent> detect_transients(std::span<const double> x, double sample_rate,
                                              const TransientConfig& config = {});

/// Copies every event unmodified so that its onset lands at round(alpha * onset).
/// Segments that collide are joined with a raised-cosine crossfade; segments
/// running off either end of the output are clipped with a warning.
std::vector<double> relocate_transients(std::span<const double> x, std::span<const TransientEvent> events,
                                        double alpha, std::size_t out_length, double sample_rate,
                                        const TransientConfig& config = {});

/// Debug dump: header "onset_seconds,peak_energy" then one row per event.
void write_events_csv(std::ostream& os, std::span<const TransientEvent> events, double sample_rate);

}  // namespace stn
