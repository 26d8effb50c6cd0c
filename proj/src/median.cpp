#include "stn/median.hpp"

#include "stn/kernels.hpp"

namespace stn {

namespace {

void check_length(std::size_t length, std::size_t extent)
{
    require(length >= 1, "median filter length must be positive");
    require(extent > 0, "median filter on an empty matrix");
    require(length <= 2 * extent, "median filter length exceeds twice the matrix extent");
}

}  // namespace

RealMatrix median_filter_time(const RealMatrix& mag, std::size_t length)
{
    check_length(length, mag.rows());
    RealMatrix out;
    kernels::omp::median_time(mag, length, out);
    return out;
}

RealMatrix median_filter_freq(const RealMatrix& mag, std::size_t length)
{
    check_length(length, mag.cols());
    RealMatrix out;
    kernels::omp::median_freq(mag, length, out);
    return out;
}

}  // namespace stn
