#include "detail.hpp"
#include "stn/kernels.hpp"

namespace stn::kernels::serial {

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
    for (std::size_t i = 0; i < h.size(); ++i) detail::mask_at(h[i], v[i], beta_lower, beta_upper, s[i], t[i], n[i]);
}

}  // namespace stn::kernels::serial
