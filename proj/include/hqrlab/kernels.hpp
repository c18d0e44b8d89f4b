#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "hqrlab/tile_matrix.hpp"

namespace hqrlab {

enum class KernelKind { GEQRT, UNMQR, TSQRT, TSMQR, TTQRT, TTMQR };

std::string_view kernel_name(KernelKind kind);

/// Flop weight in units of b³/3.
constexpr int kernel_weight(KernelKind kind) {
    switch (kind) {
        case KernelKind::GEQRT: return 4;
        case KernelKind::UNMQR: return 6;
        case KernelKind::TSQRT: return 6;
        case KernelKind::TSMQR: return 12;
        case KernelKind::TTQRT: return 2;
        case KernelKind::TTMQR: return 6;
    }
    return 0;
}

constexpr bool is_factor_kernel(KernelKind kind) {
    return kind == KernelKind::GEQRT || kind == KernelKind::TSQRT || kind == KernelKind::TTQRT;
}

/// Which side of the orthogonal factor an update applies.
enum class Op { Trans, NoTrans };

/// Householder data of one factor kernel: Q = H_0 H_1 ... H_{b-1} with
/// H_j = I - tau_j v_j v_jᵀ.
///
/// GEQRT: column j of `v` holds v_j below row j (unit entry at j implicit).
/// TSQRT/TTQRT: v_j has a unit entry at row j of the top tile and column j
/// of `v` as its bottom-tile part; for TTQRT only rows 0..j are nonzero.
struct Reflector {
    KernelKind kind = KernelKind::GEQRT;
    std::size_t b = 0;
    std::vector<double> v;
    std::vector<double> tau;

    friend bool operator==(const Reflector&, const Reflector&) = default;
};

/// Overwrites `a` with R (strictly-lower part zeroed).
Reflector geqrt(TileRef a);

/// c := Qᵀc (Op::Trans) or Qc (Op::NoTrans). Throws std::invalid_argument on a non-GEQRT reflector.
void unmqr(const Reflector& h, TileRef c, Op op = Op::Trans);

/// Annihilates the square tile `a` against the triangle `r`: [r; a] = Q [r'; 0].
Reflector tsqrt(TileRef r, TileRef a);
void tsmqr(const Reflector& h, TileRef top, TileRef bottom, Op op = Op::Trans);

/// Annihilates the triangle `bottom` against the triangle `top`.
Reflector ttqrt(TileRef top, TileRef bottom);
void ttmqr(const Reflector& h, TileRef top, TileRef bottom, Op op = Op::Trans);

}  // namespace hqrlab
