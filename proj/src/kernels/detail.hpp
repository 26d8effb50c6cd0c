#pragma once

// Per-element bodies shared by the serial and OpenMP kernels so the two
// variants differ only in loop scheduling.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "stn/fft.hpp"
#include "stn/signal.hpp"
#include "stn/stn.hpp"

namespace stn::kernels::detail {

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n)
{
    if (i < 0) return 0;
    if (i >= static_cast<std::ptrdiff_t>(n)) return n - 1;
    return static_cast<std::size_t>(i);
}

/// Median of column `bin` around `frame`; window holds `length` scratch slots.
inline double median_time_at(const RealMatrix& in, std::size_t frame, std::size_t bin, std::size_t length,
                             std::vector<double>& window)
{
    const auto first = static_cast<std::ptrdiff_t>(frame) - static_cast<std::ptrdiff_t>((length - 1) / 2);
    for (std::size_t j = 0; j < length; ++j)
        window[j] = in(clamp_index(first + static_cast<std::ptrdiff_t>(j), in.rows()), bin);
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>((length - 1) / 2);
    std::nth_element(window.begin(), mid, window.begin() + static_cast<std::ptrdiff_t>(length));
    return *mid;
}

inline double median_freq_at(const RealMatrix& in, std::size_t frame, std::size_t bin, std::size_t length,
                             std::vector<double>& window)
{
    const auto first = static_cast<std::ptrdiff_t>(bin) - static_cast<std::ptrdiff_t>((length - 1) / 2);
    const auto row = in.row(frame);
    for (std::size_t j = 0; j < length; ++j)
        window[j] = row[clamp_index(first + static_cast<std::ptrdiff_t>(j), row.size())];
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>((length - 1) / 2);
    std::nth_element(window.begin(), mid, window.begin() + static_cast<std::ptrdiff_t>(length));
    return *mid;
}

inline void analyze_frame(std::span<const double> padded, std::span<const double> window, std::size_t start,
                          const RealFft& fft, std::vector<double>& buf, std::span<Complex> out)
{
    for (std::size_t i = 0; i < window.size(); ++i) buf[i] = padded[start + i] * window[i];
    fft.forward(buf, out);
}

inline void synthesize_frame(std::span<const Complex> spec, std::span<const double> window, const RealFft& fft,
                             std::span<double> out)
{
    fft.inverse(spec, out);
    for (std::size_t i = 0; i < window.size(); ++i) out[i] *= window[i];
}

inline void mask_at(double horizontal, double vertical, double beta_lower, double beta_upper, double& s,
                    double& t, double& n)
{
    const double sum = horizontal + vertical;
    if (sum <= 0.0) {
        // No horizontal or vertical evidence at all.
        s = 0.0;
        t = 0.0;
        n = 1.0;
        return;
    }
    const double rs = horizontal / sum;
    s = soft_mask(rs, beta_upper, beta_lower);
    t = soft_mask(1.0 - rs, beta_upper, beta_lower);
    n = 1.0 - s - t;
}

}  // namespace stn::kernels::detail
