#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "stn/kernels.hpp"

namespace {

using namespace stn;

// Sizes of the first decomposition stage on 30 s of 44.1 kHz audio.
constexpr std::size_t kWindow = 8192;
constexpr std::size_t kHop = 2048;
constexpr std::size_t kSamples = 30 * 44100;
constexpr std::size_t kFrames = kSamples / kHop + 1;
constexpr std::size_t kBins = kWindow / 2 + 1;

RealMatrix random_magnitudes(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> dist(1.0);
    RealMatrix m(kFrames, kBins);
    for (double& v : m.data()) v = dist(rng);
    return m;
}

std::vector<double> padded_signal()
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist(0.0, 0.1);
    std::vector<double> x((kFrames - 1) * kHop + kWindow);
    for (double& v : x) v = dist(rng);
    return x;
}

std::vector<double> hann()
{
    std::vector<double> w(kWindow);
    for (std::size_t i = 0; i < kWindow; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / kWindow);
    return w;
}

template <auto Kernel>
void median_time(benchmark::State& state)
{
    const auto in = random_magnitudes(1);
    RealMatrix out;
    for (auto _ : state) {
        Kernel(in, 4, out);
        benchmark::DoNotOptimize(out.data().data());
    }
}

template <auto Kernel>
void median_freq(benchmark::State& state)
{
    const auto in = random_magnitudes(2);
    RealMatrix out;
    for (auto _ : state) {
        Kernel(in, 92, out);
        benchmark::DoNotOptimize(out.data().data());
    }
}

template <auto Kernel>
void analyze(benchmark::State& state)
{
    const auto x = padded_signal();
    const auto w = hann();
    const RealFft fft(kWindow);
    ComplexMatrix out(kFrames, kBins);
    for (auto _ : state) {
        Kernel(x, w, kHop, fft, out);
        benchmark::DoNotOptimize(out.data().data());
    }
}

template <auto Kernel>
void synthesize(benchmark::State& state)
{
    const auto x = padded_signal();
    const auto w = hann();
    const RealFft fft(kWindow);
    ComplexMatrix spec(kFrames, kBins);
    kernels::serial::analyze_frames(x, w, kHop, fft, spec);
    RealMatrix out;
    for (auto _ : state) {
        Kernel(spec, w, fft, out);
        benchmark::DoNotOptimize(out.data().data());
    }
}

template <auto Kernel>
void soft_masks(benchmark::State& state)
{
    const auto h = random_magnitudes(3);
    const auto v = random_magnitudes(4);
    RealMatrix s(kFrames, kBins), t(kFrames, kBins), n(kFrames, kBins);
    for (auto _ : state) {
        Kernel(h, v, 0.7, 0.8, {s, t, n});
        benchmark::DoNotOptimize(n.data().data());
    }
}

}  // namespace

BENCHMARK(median_time<kernels::serial::median_time>)->Name("median_time/serial")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(median_time<kernels::omp::median_time>)->Name("median_time/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(median_freq<kernels::serial::median_freq>)->Name("median_freq/serial")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(median_freq<kernels::omp::median_freq>)->Name("median_freq/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(analyze<kernels::serial::analyze_frames>)->Name("analyze_frames/serial")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(analyze<kernels::omp::analyze_frames>)->Name("analyze_frames/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(synthesize<kernels::serial::synthesize_frames>)->Name("synthesize_frames/serial")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(synthesize<kernels::omp::synthesize_frames>)->Name("synthesize_frames/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(soft_masks<kernels::serial::soft_masks>)->Name("soft_masks/serial")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(soft_masks<kernels::omp::soft_masks>)->Name("soft_masks/omp")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
