#include "stn/wav.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "stn/logging.hpp"

namespace stn {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p)
{
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p)
{
    return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v)
{
    out.push_back(v & 0xFF);
    out.push_back(v >> 8);
}

void put32(std::vector<unsigned char>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

}  // namespace

Signal read_wav(const std::filesystem::path& path, WavInfo* info)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw IoError(path.string() + ": not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        const std::size_t size = le32(chunk + 4);
        const std::size_t body = pos + 8;
        const std::size_t available = std::min(size, bytes.size() - body);
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (available < 16) throw IoError(path.string() + ": truncated fmt chunk");
            format = le16(chunk + 8);
            channels = le16(chunk + 10);
            rate = le32(chunk + 12);
            bits = le16(chunk + 22);
            if (format == kFormatExtensible && available >= 26) format = le16(chunk + 8 + 24);
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = available;
        }
        pos = body + size + (size & 1);
    }
    if (!data || channels == 0 || rate == 0) throw IoError(path.string() + ": missing fmt or data chunk");
    if (channels > 2) throw IoError(path.string() + ": only mono and stereo are supported");
    const bool is_float = format == kFormatFloat;
    if (!(format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32)) && !(is_float && bits == 32))
        throw IoError(path.string() + ": unsupported sample format");

    const std::size_t width = bits / 8;
    const std::size_t frames = data_size / (width * channels);
    std::vector<std::vector<double>> chans(channels, std::vector<double>(frames));
    const double scale = is_float ? 1.0 : 1.0 / std::ldexp(1.0, bits - 1);
    for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t c = 0; c < channels; ++c) {
            const unsigned char* p = data + (i * channels + c) * width;
            double v = 0.0;
            if (is_float) {
                float f;
                std::uint32_t u = le32(p);
                std::memcpy(&f, &u, 4);
                v = f;
            } else if (bits == 16) {
                v = static_cast<std::int16_t>(le16(p));
            } else if (bits == 24) {
                std::int32_t s = p[0] | p[1] << 8 | p[2] << 16;
                if (s & 0x800000) s -= 0x1000000;
                v = s;
            } else {
                v = static_cast<std::int32_t>(le32(p));
            }
            chans[c][i] = v * scale;
        }
    }
    if (info) *info = {static_cast<int>(rate), channels, bits, is_float};
    try {
        return Signal(static_cast<int>(rate), std::move(chans));
    } catch (const InvalidArgument& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_wav(const std::filesystem::path& path, const Signal& signal, int bits_per_sample)
{
    require(bits_per_sample == 16 || bits_per_sample == 24, "WAV output supports 16 or 24 bits");
    signal.validate();
    const std::size_t channels = signal.num_channels();
    const std::size_t width = static_cast<std::size_t>(bits_per_sample) / 8;
    const std::size_t data_size = signal.length() * channels * width;
    const double full = std::ldexp(1.0, bits_per_sample - 1);

    std::vector<unsigned char> out;
    out.reserve(44 + data_size);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put32(out, static_cast<std::uint32_t>(36 + data_size));
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put32(out, 16);
    put16(out, kFormatPcm);
    put16(out, static_cast<std::uint16_t>(channels));
    put32(out, static_cast<std::uint32_t>(signal.sample_rate));
    put32(out, static_cast<std::uint32_t>(signal.sample_rate * channels * width));
    put16(out, static_cast<std::uint16_t>(channels * width));
    put16(out, static_cast<std::uint16_t>(bits_per_sample));
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put32(out, static_cast<std::uint32_t>(data_size));

    std::size_t clipped = 0;
    for (std::size_t i = 0; i < signal.length(); ++i) {
        for (std::size_t c = 0; c < channels; ++c) {
            double v = std::round(signal.channels[c][i] * full);
            if (v > full - 1 || v < -full) {
                ++clipped;
                v = std::clamp(v, -full, full - 1);
            }
            const auto s = static_cast<std::int32_t>(v);
            for (std::size_t b = 0; b < width; ++b) out.push_back(static_cast<unsigned char>((s >> (8 * b)) & 0xFF));
        }
    }
    if (clipped) log().warn("{}: {} samples clipped", path.string(), clipped);

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path.string());
    file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("write failed: " + path.string());
}

}  // namespace stn
