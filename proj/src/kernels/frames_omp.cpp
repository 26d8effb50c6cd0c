#include "detail.hpp"
#include "stn/kernels.hpp"

namespace stn::kernels::omp {

void analyze_frames(std::span<const double> padded, std::span<const double> window, std::size_t hop,
                    const RealFft& fft, ComplexMatrix& out)
{
    const auto frames = static_cast<std::ptrdiff_t>(out.rows());
#pragma omp parallel
    {
        std::vector<double> buf(window.size());
#pragma omp for schedule(static)
        for (std::ptrdiff_t m = 0; m < frames; ++m) {
            const auto frame = static_cast<std::size_t>(m);
            detail::analyze_frame(padded, window, frame * hop, fft, buf, out.row(frame));
        }
    }
}

void synthesize_frames(const ComplexMatrix& spec, std::span<const double> window, const RealFft& fft,
                       RealMatrix& out)
{
    out = RealMatrix(spec.rows(), window.size());
    const auto frames = static_cast<std::ptrdiff_t>(spec.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < frames; ++m) {
        const auto frame = static_cast<std::size_t>(m);
        detail::synthesize_frame(spec.row(frame), window, fft, out.row(frame));
    }
}

}  // namespace stn::kernels::omp
