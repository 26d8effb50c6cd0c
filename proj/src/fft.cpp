#include "stn/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "stn/error.hpp"

namespace stn {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::recursive_mutex& planner_mutex()
{
    static std::recursive_mutex m;
    return m;
}

}  // namespace

struct RealFft::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    ~Plans()
    {
        std::lock_guard lock(planner_mutex());
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

namespace {

std::shared_ptr<const RealFft::Plans> plans_for(std::size_t n)
{
    static std::map<std::size_t, std::shared_ptr<const RealFft::Plans>> cache;
    std::lock_guard lock(planner_mutex());
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    std::vector<double> real(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

    auto* raw = new RealFft::Plans;
    raw->r2c = fftw_plan_dft_r2c_1d(size, real.data(), cplx, flags);
    raw->c2r = fftw_plan_dft_c2r_1d(size, cplx, real.data(), flags | FFTW_DESTROY_INPUT);
    std::shared_ptr<const RealFft::Plans> plans(raw);
    if (!raw->r2c || !raw->c2r) throw Error("FFTW failed to create a plan");
    cache.emplace(n, plans);
    return plans;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n)
{
    require(n >= 2 && n % 2 == 0, "FFT size must be even and at least 2");
    plans_ = plans_for(n);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const
{
    require(in.size() == n_ && out.size() == bins(), "RealFft::forward size mismatch");
    // Out-of-place r2c never writes to its input.
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const
{
    require(in.size() == bins() && out.size() == n_, "RealFft::inverse size mismatch");
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double scale = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= scale;
}

void complex_fft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out)
{
    require(in.size() == out.size() && !in.empty(), "complex_fft size mismatch");
    std::vector<std::complex<double>> src(in.begin(), in.end());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(in.size()), reinterpret_cast<fftw_complex*>(src.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace stn
