#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace stn {

/// Real-input FFT of fixed size backed by FFTW. Plans are shared per size
/// through a process-wide cache, so constructing one is cheap after the first
/// time. transform calls are safe to issue concurrently from several threads.
class RealFft {
public:
    explicit RealFft(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::size_t bins() const noexcept { return n_ / 2 + 1; }

    /// in.size() == size(), out.size() == bins(). Unnormalized.
    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

    /// in.size() == bins(), out.size() == size(). Scaled by 1/size() so that
    /// inverse(forward(x)) == x.
    void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

    struct Plans;

private:
    std::size_t n_;
    std::shared_ptr<const Plans> plans_;
};

/// Complex-to-complex forward FFT, used to build CQT spectral kernels. Unnormalized.
void complex_fft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace stn
