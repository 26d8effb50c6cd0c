#include "detail.hpp"
#include "stn/kernels.hpp"

namespace stn::kernels::omp {

void soft_masks(const RealMatrix& horizontal, const RealMatrix& vertical, double beta_lower, double beta_upper,
                MaskOutputs out)
{
    out.sines = RealMatrix(horizontal.rows(), horizontal.cols());
    out.transients = RealMatrix(horizontal.rows(), horizontal.cols());
    out.noise = RealMatrix(horizontal.rows(), horizontal.cols());
    const auto& h = horizontal.data();
    const auto& v = vertical.data();
    auto& s = out.sines.data();
    auto& t = out.transients.data();
    auto& n = out.noise.data();
    const auto count = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto j = static_cast<std::size_t>(i);
        detail::mask_at(h[j], v[j], beta_lower, beta_upper, s[j], t[j], n[j]);
    }
}

}  // namespace stn::kernels::omp
