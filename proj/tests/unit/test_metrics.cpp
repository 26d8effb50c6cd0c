#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "signals.hpp"
#include "stn/metrics.hpp"

TEST_CASE("third-octave spectrum matches the oracle")
{
    const auto x = testsig::pink_noise(3 * 44100, 0.1, 1);
    const auto bands = stn::third_octave_spectrum(x, 44100);
    std::vector<double> centers;
    const auto ref = oracle::third_octave_db(x, 44100, 100, 16000, &centers);
    REQUIRE(bands.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        REQUIRE(std::abs(bands[i].center_hz - centers[i]) < 1e-9 * centers[i]);
        REQUIRE(std::abs(10 * std::log10(bands[i].power) - ref[i]) < 1e-6);
    }
    REQUIRE(std::abs(bands.front().center_hz - 100.0) < 1e-9);
    REQUIRE(std::abs(bands.back().center_hz - 15848.9) < 0.1);
}

TEST_CASE("identical files compare as identical")
{
    const auto x = testsig::white_noise(2 * 44100, 0.1, 2);
    const auto s = stn::Signal::mono(x, 44100);
    const auto r = stn::compare(s, s, 1.0);
    REQUIRE(r.length_ratio == 1.0);
    REQUIRE(r.spectrum.distance_db < 1e-9);
    REQUIRE(std::abs(r.spectrum.level_offset_db) < 1e-9);
    REQUIRE(r.loudness_original);
    REQUIRE(*r.loudness_original == *r.loudness_stretched);
}

TEST_CASE("gain shows up as a level offset only")
{
    const auto x = testsig::white_noise(2 * 44100, 0.1, 3);
    std::vector<double> y(x);
    for (double& v : y) v *= 0.5;
    const auto d = stn::spectral_distance(x, y, 44100);
    REQUIRE(std::abs(d.level_offset_db + 6.0206) < 1e-3);
    REQUIRE(d.distance_db < 1e-9);
}

TEST_CASE("onset mapping error for scaled click positions")
{
    std::vector<double> x(88200, 0.0), y(4 * 88200, 0.0);
    testsig::add_clicks(x, {10000, 40000, 70000}, 0.8, 6.0, 200);
    testsig::add_clicks(y, {40000, 160000, 280000 + 44}, 0.8, 6.0, 200);
    const auto e = stn::onset_mapping_error(x, y, 4.0, 44100);
    REQUIRE(e.matched == 3);
    REQUIRE(e.max_ms < 2.0);
}

TEST_CASE("mismatched sample rates are rejected")
{
    const auto a = stn::Signal::mono(std::vector<double>(1000, 0.0), 44100);
    const auto b = stn::Signal::mono(std::vector<double>(1000, 0.0), 48000);
    REQUIRE_THROWS_AS(stn::compare(a, b, 1.0), stn::InvalidArgument);
}
