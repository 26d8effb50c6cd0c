#include "detail.hpp"
#include "stn/kernels.hpp"

namespace stn::kernels::serial {

void median_time(const RealMatrix& in, std::size_t length, RealMatrix& out)
{
    out = RealMatrix(in.rows(), in.cols());
    std::vector<double> window(length);
    for (std::size_t k = 0; k < in.cols(); ++k)
        for (std::size_t m = 0; m < in.rows(); ++m) out(m, k) = detail::median_time_at(in, m, k, length, window);
}

void median_freq(const RealMatrix& in, std::size_t length, RealMatrix& out)
{
    out = RealMatrix(in.rows(), in.cols());
    std::vector<double> window(length);
    for (std::size_t m = 0; m < in.rows(); ++m)
        for (std::size_t k = 0; k < in.cols(); ++k) out(m, k) = detail::median_freq_at(in, m, k, length, window);
}

}  // namespace stn::kernels::serial
