#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "signals.hpp"
#include "stn/matrix_io.hpp"
#include "stn/resample.hpp"
#include "stn/wav.hpp"

namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name)
{
    return fs::temp_directory_path() / ("stn_io_" + std::to_string(::getpid()) + "_" + name);
}

template <typename T>
void put(std::ofstream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

TEST_CASE("16 and 24 bit PCM round trip within one LSB")
{
    const auto x = testsig::uniform_noise(5000, 0.99, 1);
    const auto y = testsig::uniform_noise(5000, 0.5, 2);
    const stn::Signal s(22050, {x, y});
    for (int bits : {16, 24}) {
        const auto p = tmp("rt" + std::to_string(bits) + ".wav");
        stn::write_wav(p, s, bits);
        stn::WavInfo info;
        const auto r = stn::read_wav(p, &info);
        REQUIRE(info.bits_per_sample == bits);
        REQUIRE(info.channels == 2);
        REQUIRE(info.sample_rate == 22050);
        REQUIRE(r.length() == 5000);
        const double lsb = std::ldexp(1.0, -(bits - 1));
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < 5000; ++i) REQUIRE(std::abs(r.channels[c][i] - s.channels[c][i]) <= 0.5 * lsb + 1e-12);
        REQUIRE(fs::file_size(p) == static_cast<std::uintmax_t>(44 + 5000 * 2 * bits / 8));
        // Rewriting the decoded signal is byte-exact.
        const auto p2 = tmp("rt2.wav");
        stn::write_wav(p2, r, bits);
        std::ifstream a(p, std::ios::binary), b(p2, std::ios::binary);
        REQUIRE(std::string(std::istreambuf_iterator<char>(a), {}) == std::string(std::istreambuf_iterator<char>(b), {}));
        fs::remove(p);
        fs::remove(p2);
    }
}

TEST_CASE("clipping to full scale")
{
    const auto p = tmp("clip.wav");
    stn::write_wav(p, stn::Signal::mono({2.0, -2.0, 1.0, -1.0}, 8000), 16);
    const auto r = stn::read_wav(p);
    REQUIRE(r.channels[0][0] == 32767.0 / 32768.0);
    REQUIRE(r.channels[0][1] == -1.0);
    fs::remove(p);
}

TEST_CASE("float32 files are read")
{
    const auto p = tmp("float.wav");
    {
        std::ofstream out(p, std::ios::binary);
        const float samples[3] = {0.5f, -0.25f, 1.0f};
        out.write("RIFF", 4);
        put<std::uint32_t>(out, 36 + 12);
        out.write("WAVEfmt ", 8);
        put<std::uint32_t>(out, 16);
        put<std::uint16_t>(out, 3);
        put<std::uint16_t>(out, 1);
        put<std::uint32_t>(out, 44100);
        put<std::uint32_t>(out, 44100 * 4);
        put<std::uint16_t>(out, 4);
        put<std::uint16_t>(out, 32);
        out.write("data", 4);
        put<std::uint32_t>(out, 12);
        out.write(reinterpret_cast<const char*>(samples), 12);
    }
    stn::WavInfo info;
    const auto r = stn::read_wav(p, &info);
    REQUIRE(info.is_float);
    REQUIRE(r.channels[0] == std::vector<double>{0.5, -0.25, 1.0});
    fs::remove(p);
}

TEST_CASE("unreadable files raise IoError")
{
    REQUIRE_THROWS_AS(stn::read_wav("/nonexistent/file.wav"), stn::IoError);
    const auto p = tmp("garbage.wav");
    std::ofstream(p) << "this is not a wav file at all";
    REQUIRE_THROWS_AS(stn::read_wav(p), stn::IoError);
    fs::remove(p);
    REQUIRE_THROWS_AS(stn::read_matrix("/nonexistent/m.bin"), stn::IoError);
}

TEST_CASE("matrix file layout")
{
    stn::RealMatrix m(2, 3);
    for (std::size_t i = 0; i < 6; ++i) m.data()[i] = 0.5 * i;
    const auto p = tmp("m.bin");
    stn::write_matrix(p, m);
    REQUIRE(fs::file_size(p) == 8 + 6 * 4);
    std::ifstream in(p, std::ios::binary);
    unsigned char bytes[32];
    in.read(reinterpret_cast<char*>(bytes), 32);
    REQUIRE(bytes[0] == 2);
    REQUIRE(bytes[1] == 0);
    REQUIRE(bytes[4] == 3);
    float f;
    std::memcpy(&f, bytes + 8 + 4 * 5, 4);
    REQUIRE(f == 2.5f);
    REQUIRE(stn::read_matrix(p) == m);
    fs::remove(p);
}

TEST_CASE("truncated matrix files are rejected")
{
    const auto p = tmp("short.bin");
    {
        std::ofstream out(p, std::ios::binary);
        put<std::uint32_t>(out, 4);
        put<std::uint32_t>(out, 4);
        put<float>(out, 1.0f);
    }
    REQUIRE_THROWS_AS(stn::read_matrix(p), stn::IoError);
    fs::remove(p);
}

TEST_CASE("resampling keeps frequency and level")
{
    const auto x = testsig::sine(1000.0, 0.5, 48000, 48000);
    const auto y = stn::resample(x, 48000, 44100);
    REQUIRE(y.size() == 44100);
    const auto mid = std::span<const double>(y).subspan(5000, 30000);
    REQUIRE(std::abs(oracle::dominant_frequency(mid, 44100, 990, 1010) - 1000.0) < 0.05);
    const double rms = std::sqrt(oracle::energy(mid) / mid.size());
    REQUIRE(std::abs(rms - 0.5 / std::sqrt(2.0)) < 0.005);
    const auto ref = testsig::sine(1000.0, 0.5, 44100, 44100);
    REQUIRE(oracle::snr_db(std::span<const double>(ref).subspan(5000, 30000), mid) > 60.0);
}

TEST_CASE("resampling a stereo signal")
{
    const stn::Signal s(22050, {testsig::sine(440, 0.3, 22050, 22050), testsig::sine(660, 0.3, 22050, 22050)});
    const auto r = stn::resample(s, 44100);
    REQUIRE(r.sample_rate == 44100);
    REQUIRE(r.num_channels() == 2);
    REQUIRE(r.length() == 44100);
}
