#include "detail.hpp"
#include "stn/kernels.hpp"

namespace stn::kernels::omp {

void median_time(const RealMatrix& in, std::size_t length, RealMatrix& out)
{
    out = RealMatrix(in.rows(), in.cols());
    const auto bins = static_cast<std::ptrdiff_t>(in.cols());
#pragma omp parallel
    {
        std::vector<double> window(length);
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < bins; ++k) {
            const auto bin = static_cast<std::size_t>(k);
            for (std::size_t m = 0; m < in.rows(); ++m)
                out(m, bin) = detail::median_time_at(in, m, bin, length, window);
        }
    }
}

void median_freq(const RealMatrix& in, std::size_t length, RealMatrix& out)
{
    out = RealMatrix(in.rows(), in.cols());
    const auto frames = static_cast<std::ptrdiff_t>(in.rows());
#pragma omp parallel
    {
        std::vector<double> window(length);
#pragma omp for schedule(static)
        for (std::ptrdiff_t m = 0; m < frames; ++m) {
            const auto frame = static_cast<std::size_t>(m);
            for (std::size_t k = 0; k < in.cols(); ++k)
                out(frame, k) = detail::median_freq_at(in, frame, k, length, window);
        }
    }
}

}  // namespace stn::kernels::omp
