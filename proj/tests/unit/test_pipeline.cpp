#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "signals.hpp"
#include "stn/loudness.hpp"
#include "stn/pipeline.hpp"

namespace {

stn::TsmRequest request(std::vector<double> x, double alpha, bool normalize = false)
{
    stn::TsmRequest r;
    r.input = stn::Signal::mono(std::move(x), 44100);
    r.alpha = alpha;
    r.config = stn::TsmConfig::defaults(44100);
    if (!normalize) r.config.target_lufs.reset();
    else r.config.target_lufs = -23.0;
    return r;
}

std::vector<double> tone_with_clicks(std::size_t n)
{
    std::vector<double> x(n, 0.0);
    for (int h = 1; h <= 4; ++h) {
        const auto s = testsig::sine(330.0 * h, 0.2 / h, n);
        for (std::size_t i = 0; i < n; ++i) x[i] += s[i];
    }
    testsig::add_clicks(x, {15000, 50000}, 0.6, 8.0);
    return x;
}

double energy_sum(const stn::ChannelTrace& t)
{
    return oracle::energy(t.sines) + oracle::energy(t.transients) + oracle::energy(t.noise);
}

}  // namespace

TEST_CASE("output length equals round(alpha * n) for every path")
{
    const auto x = tone_with_clicks(60001);
    for (double a : {1.0, 2.5, 4.0, 8.0}) {
        const auto res = stn::tsm(request(x, a));
        const std::size_t n = std::llround(a * x.size());
        REQUIRE(res.output.length() == n);
        REQUIRE(res.channels[0].sines.size() == n);
        REQUIRE(res.channels[0].transients.size() == n);
        REQUIRE(res.channels[0].noise.size() == n);
    }
}

TEST_CASE("alpha one is a near-identity round trip")
{
    const auto x = tone_with_clicks(2 * 44100);
    const auto res = stn::tsm(request(x, 1.0));
    REQUIRE(oracle::snr_db(x, res.output.channels[0]) >= 20.0);
}

TEST_CASE("silence in gives silence out")
{
    const auto res = stn::tsm(request(std::vector<double>(30000, 0.0), 4.0, true));
    REQUIRE(res.output.length() == 120000);
    for (double v : res.output.channels[0]) REQUIRE(v == 0.0);
    REQUIRE(!res.loudness_before);
}

TEST_CASE("soda-style clip at alpha four")
{
    const std::size_t n = 2 * 44100;
    const auto hiss_only = testsig::white_noise(n, 0.02, 8);
    std::vector<double> x(hiss_only);
    const std::vector<std::size_t> clicks{8000, 40000, 70000};
    testsig::add_clicks(x, clicks, 0.9, 25.0, 400);

    const auto res = stn::tsm(request(x, 4.0));
    const auto& y = res.output.channels[0];
    REQUIRE(std::abs(static_cast<long>(y.size()) - std::lround(4.0 * n)) <= 1024);

    for (std::size_t c : clicks) {
        const std::size_t expect = 4 * c;
        std::size_t best = expect - 2000;
        for (std::size_t i = expect - 2000; i < expect + 2000; ++i)
            if (std::abs(y[i]) > std::abs(y[best])) best = i;
        REQUIRE(std::abs(static_cast<double>(best) - static_cast<double>(expect)) / 44.1 <= 5.0);
    }

    // Hiss band: compare regions away from the clicks.
    const auto a = oracle::third_octave_db(std::span<const double>(hiss_only).subspan(10000, 25000), 44100, 100, 16000);
    const auto b = oracle::third_octave_db(std::span<const double>(y).subspan(4 * 10000 + 4000, 4 * 25000 - 8000), 44100, 100, 16000);
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(std::abs(a[i] - b[i]) <= 3.0);
}

TEST_CASE("component routing")
{
    const auto tone = testsig::sine(440.0, 0.5, 2 * 44100);
    const auto rt = stn::tsm(request(tone, 4.0));
    REQUIRE(oracle::energy(rt.channels[0].sines) >= 0.9 * energy_sum(rt.channels[0]));

    std::vector<double> clicks(2 * 44100, 0.0);
    for (std::size_t p = 4000; p < clicks.size(); p += 11025) clicks[p] = 0.9;
    const auto rc = stn::tsm(request(clicks, 4.0));
    REQUIRE(oracle::energy(rc.channels[0].transients) >= 0.8 * energy_sum(rc.channels[0]));
}

TEST_CASE("transients bypass envelope shaping")
{
    const auto x = tone_with_clicks(60000);
    auto on = request(x, 4.0);
    auto off = request(x, 4.0);
    off.config.envelope_enabled = false;
    const auto a = stn::tsm(on), b = stn::tsm(off);
    REQUIRE(a.channels[0].transients == b.channels[0].transients);
    REQUIRE(!a.channels[0].envelope_gain.empty());
    REQUIRE(b.channels[0].envelope_gain.empty());
}

TEST_CASE("fixed seed is deterministic")
{
    const auto x = testsig::pink_noise(40000, 0.1, 2);
    const auto a = stn::tsm(request(x, 4.0, true));
    const auto b = stn::tsm(request(x, 4.0, true));
    REQUIRE(a.output.channels == b.output.channels);
    auto r = request(x, 4.0, true);
    r.seed = 1234;
    REQUIRE(stn::tsm(r).output.channels != a.output.channels);
}

TEST_CASE("stereo channels are independent and symmetric")
{
    const auto l = tone_with_clicks(50000);
    const auto r = testsig::pink_noise(50000, 0.1, 4);

    stn::TsmRequest same;
    same.input = stn::Signal(44100, {l, l});
    same.alpha = 4.0;
    const auto s = stn::tsm_stereo(same);
    REQUIRE(s.output.channels[0] == s.output.channels[1]);

    stn::TsmRequest lr = same, rl = same;
    lr.input = stn::Signal(44100, {l, r});
    rl.input = stn::Signal(44100, {r, l});
    const auto a = stn::tsm_stereo(lr), b = stn::tsm_stereo(rl);
    REQUIRE(a.output.channels[0] == b.output.channels[1]);
    REQUIRE(a.output.channels[1] == b.output.channels[0]);

    stn::TsmRequest left_only = same;
    left_only.input = stn::Signal(44100, {l, std::vector<double>(l.size(), 0.0)});
    const auto lo = stn::tsm_stereo(left_only);
    double peak = 0;
    for (double v : lo.output.channels[1]) peak = std::max(peak, std::abs(v));
    REQUIRE(peak <= std::pow(10.0, -80.0 / 20.0));

    REQUIRE_THROWS_AS(stn::tsm_stereo(request(l, 2.0)), stn::InvalidArgument);
}

TEST_CASE("loudness normalization is applied to the mix")
{
    const auto x = tone_with_clicks(3 * 44100);
    const auto res = stn::tsm(request(x, 2.0, true));
    REQUIRE(res.loudness_before);
    REQUIRE(std::abs(stn::integrated_loudness(res.output) + 23.0) <= 0.1);
}

TEST_CASE("requests are validated")
{
    const auto x = testsig::white_noise(10000, 0.1, 1);
    REQUIRE_THROWS_AS(stn::tsm(request(x, 0.5)), stn::InvalidArgument);
    REQUIRE_THROWS_AS(stn::tsm(request(x, 17.0)), stn::InvalidArgument);
    REQUIRE_THROWS_AS(stn::tsm(request({}, 2.0)), stn::InvalidArgument);
}

TEST_CASE("backend errors carry channel context")
{
    auto r = request(testsig::white_noise(20000, 0.1, 1), 2.0);
    r.config.backend = stn::NoiseBackend::Neural;
    try {
        stn::tsm(r);
        FAIL("expected BackendError");
    } catch (const stn::BackendError& e) {
        REQUIRE(e.kind() == stn::BackendError::Kind::Unavailable);
        REQUIRE(std::string(e.what()).find("channel 0") != std::string::npos);
    }
    r.config.neural.command = FAKE_NEURAL_PATH;
    const auto res = stn::tsm(r);
    REQUIRE(res.output.length() == 40000);
}
