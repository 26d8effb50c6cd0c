#include "detail.hpp"
#include "stn/kernels.hpp"

namespace stn::kernels::serial {

void analyze_frames(std::span<const double> padded, std::span<const double> window, std::size_t hop,
                    const RealFft& fft, ComplexMatrix& out)
{
    std::vector<double> buf(window.size());
    for (std::size_t m = 0; m < out.rows(); ++m) detail::analyze_frame(padded, window, m * hop, fft, buf, out.row(m));
}

void synthesize_frames(const ComplexMatrix& spec, std::span<const double> window, const RealFft& fft,
                       RealMatrix& out)
{
    out = RealMatrix(spec.rows(), window.size());
    for (std::size_t m = 0; m < spec.rows(); ++m) detail::synthesize_frame(spec.row(m), window, fft, out.row(m));
}

}  // namespace stn::kernels::serial
