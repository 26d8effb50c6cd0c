#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference and an OpenMP version. The public API dispatches to the OpenMP
// versions; tests check both produce bit-identical results, and
// bench/bench_kernels compares their throughput.

#include <cstddef>
#include <span>

#include "stn/fft.hpp"
#include "stn/signal.hpp"

namespace stn::kernels {

struct MaskOutputs {
    RealMatrix& sines;
    RealMatrix& transients;
    RealMatrix& noise;
};

namespace serial {

void median_time(const RealMatrix& in, std::size_t length, RealMatrix& out);
void median_freq(const RealMatrix& in, std::size_t length, RealMatrix& out);

/// Windowed FFT of every frame; frame m starts at padded[m * hop].
void analyze_frames(std::span<const double> padded, std::span<const double> window, std::size_t hop,
                    const RealFft& fft, ComplexMatrix& out);

/// Inverse FFT of every row times the window; out is frames x window_length.
void synthesize_frames(const ComplexMatrix& spec, std::span<const double> window, const RealFft& fft,
                       RealMatrix& out);

void soft_masks(const RealMatrix& horizontal, const RealMatrix& vertical, double beta_lower,
                double beta_upper, MaskOutputs out);

}  // namespace serial

namespace omp {

void median_time(const RealMatrix& in, std::size_t length, RealMatrix& out);
void median_freq(const RealMatrix& in, std::size_t length, RealMatrix& out);
void analyze_frames(std::span<const double> padded, std::span<const double> window, std::size_t hop,
                    const RealFft& fft, ComplexMatrix& out);
void synthesize_frames(const ComplexMatrix& spec, std::span<const double> window, const RealFft& fft,
                       RealMatrix& out);
void soft_masks(const RealMatrix& horizontal, const RealMatrix& vertical, double beta_lower,
                double beta_upper, MaskOutputs out);

}  // namespace omp

}  // namespace stn::kernels
