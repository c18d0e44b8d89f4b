#include "hqrlab/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hqrlab {
namespace {

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::ranges::reverse(bytes);
        return std::bit_cast<T>(bytes);
    }
    return v;
}

void put_u32(std::ostream& os, std::uint32_t v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("TQRM: truncated header");
    return to_little(v);
}

}  // namespace

void write_tqrm(std::ostream& os, const TileMatrix& m) {
    os.write("TQRM", 4);
    put_u32(os, kTqrmVersion);
    put_u32(os, static_cast<std::uint32_t>(m.mt()));
    put_u32(os, static_cast<std::uint32_t>(m.nt()));
    put_u32(os, static_cast<std::uint32_t>(m.b()));
    // Storage is already tile-major, row-major over tiles, column-major inside.
    for (double v : m.storage()) {
        const auto bits = to_little(std::bit_cast<std::uint64_t>(v));
        os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!os) throw std::runtime_error("TQRM: write failed");
}

TileMatrix read_tqrm(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TQRM", 4) != 0) throw std::runtime_error("TQRM: bad magic");
    const std::uint32_t version = get_u32(is);
    if (version != kTqrmVersion) throw std::runtime_error("TQRM: unsupported version " + std::to_string(version));
    const std::uint32_t mt = get_u32(is);
    const std::uint32_t nt = get_u32(is);
    const std::uint32_t b = get_u32(is);
    if (mt == 0 || nt == 0 || b == 0) throw std::runtime_error("TQRM: zero dimension");
    TileMatrix m(mt, nt, b);
    for (std::size_t i = 0; i < mt; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            TileRef t = m.tile(i, j);
            for (double& v : t.span()) {
                std::uint64_t bits = 0;
                if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw std::runtime_error("TQRM: truncated payload");
                v = std::bit_cast<double>(to_little(bits));
            }
        }
    return m;
}

void save_tqrm(const std::string& path, const TileMatrix& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_tqrm(os, m);
}

TileMatrix load_tqrm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_tqrm(is);
}

}  // namespace hqrlab
