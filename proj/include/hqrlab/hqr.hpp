#pragma once

#include <string>
#include <string_view>

#include "hqrlab/distribution.hpp"
#include "hqrlab/elimination.hpp"
#include "hqrlab/trees.hpp"

namespace hqrlab {

/// Parameters of the hierarchical elimination list. Rows are spread over the
/// p clusters of the virtual grid cyclically (row i belongs to cluster i mod p);
/// `dist` only decides where tasks run, never the shape of the reduction.
struct HqrConfig {
    int mt = 1;
    int nt = 1;
    int p = 1;
    int q = 1;
    int a = 1;  // TS domain size in local rows; 1 disables TS kernels
    TreeKind low_tree = TreeKind::FlatTree;
    TreeKind high_tree = TreeKind::FlatTree;
    bool domino = false;
    Distribution dist = Distribution::cyclic2d(1, 1);

    friend bool operator==(const HqrConfig&, const HqrConfig&) = default;
};

/// Throws std::invalid_argument describing the first bad field.
void validate_config(const HqrConfig& cfg);

enum class TileLevel { TS0, LOW1, DOMINO2, HIGH3, ROOT };

std::string_view level_name(TileLevel level);

/// Level of tile (i, k) for panel k. Throws std::invalid_argument when i < k
/// or the tile lies outside the matrix.
TileLevel tile_level(const HqrConfig& cfg, int i, int k);

/// Composition of the four reduction levels, panel by panel: TS domains, the
/// low-level tree onto the local diagonal, the domino chain from each
/// cluster's top row, and the high-level tree over the cluster tops. Only
/// TS0 victims are TS-flagged. The result is scheduled with unit_schedule.
EliminationList gen_hqr(const HqrConfig& cfg);

/// Hierarchical flat-in-process, binary-across-process scheme on a 1D block
/// layout: p = 1, a = mt/r, Block1D(r), binary low-level tree.
/// Throws std::invalid_argument unless r divides mt.
HqrConfig preset_slhd10(int mt, int nt, int r);

/// Single flat TS tree per panel (the diagonal tile kills everything).
HqrConfig preset_bbd10(int mt, int nt, Distribution dist = Distribution::cyclic2d(1, 1));

/// JSON round trip: {"mt","nt","p","q","a","low","high","domino","dist":{...}}.
/// When "dist" is absent the distribution is cyclic2d(p, q).
/// Throws std::invalid_argument on malformed input.
HqrConfig config_from_json(std::string_view text);
std::string config_to_json(const HqrConfig& cfg);

}  // namespace hqrlab
