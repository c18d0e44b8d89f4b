#pragma once

#include <iosfwd>
#include <string>

#include "hqrlab/tile_matrix.hpp"

namespace hqrlab {

/// TQRM container: "TQRM", then version, mt, nt, b as little-endian u32,
/// then the tiles in row-major tile order, each tile column-major f64 LE.
inline constexpr unsigned kTqrmVersion = 1;

void write_tqrm(std::ostream& os, const TileMatrix& m);
/// Throws std::runtime_error on a bad header, an unsupported version or a truncated payload.
TileMatrix read_tqrm(std::istream& is);

void save_tqrm(const std::string& path, const TileMatrix& m);
TileMatrix load_tqrm(const std::string& path);

}  // namespace hqrlab
