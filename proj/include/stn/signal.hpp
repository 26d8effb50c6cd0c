#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stn/error.hpp"

namespace stn {

using Complex = std::complex<double>;

/// Dense row-major matrix. For spectrogram-shaped data rows are frames and
/// columns are bins.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    bool same_shape(const Matrix& other) const noexcept
    {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

/// Multichannel audio. All channels share one length; samples are nominally in [-1, 1].
struct Signal {
    int sample_rate = 44100;
    std::vector<std::vector<double>> channels;

    Signal() = default;
    Signal(int rate, std::vector<std::vector<double>> chans)
        : sample_rate(rate), channels(std::move(chans))
    {
        validate();
    }

    static Signal mono(std::vector<double> samples, int rate)
    {
        std::vector<std::vector<double>> chans;
        chans.push_back(std::move(samples));
        return Signal(rate, std::move(chans));
    }

    std::size_t num_channels() const noexcept { return channels.size(); }
    std::size_t length() const noexcept { return channels.empty() ? 0 : channels.front().size(); }
    double duration() const noexcept { return static_cast<double>(length()) / sample_rate; }

    std::span<const double> channel(std::size_t c) const { return channels.at(c); }

    void validate() const
    {
        require(sample_rate > 0, "sample rate must be positive");
        require(channels.size() == 1 || channels.size() == 2, "signal must have 1 or 2 channels");
        for (const auto& ch : channels) {
            require(ch.size() == channels.front().size(), "channels must have equal length");
            for (double v : ch) require(std::isfinite(v), "signal contains non-finite samples");
        }
    }
};

}  // namespace stn
