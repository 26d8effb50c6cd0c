#include "stn/matrix_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace stn {

namespace {

void put32(std::ostream& os, std::uint32_t v)
{
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get32(std::istream& is)
{
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated matrix file");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const RealMatrix& m)
{
    require(m.rows() <= std::numeric_limits<std::uint32_t>::max() && m.cols() <= std::numeric_limits<std::uint32_t>::max(),
            "matrix too large for the binary format");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    put32(os, static_cast<std::uint32_t>(m.rows()));
    put32(os, static_cast<std::uint32_t>(m.cols()));
    for (double v : m.data()) {
        const float f = static_cast<float>(v);
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        put32(os, u);
    }
    if (!os) throw IoError("write failed: " + path.string());
}

RealMatrix read_matrix(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    const std::size_t rows = get32(is);
    const std::size_t cols = get32(is);
    RealMatrix m(rows, cols);
    for (double& v : m.data()) {
        const std::uint32_t u = get32(is);
        float f;
        std::memcpy(&f, &u, 4);
        v = f;
    }
    return m;
}

}  // namespace stn
