#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hqrlab/elimination.hpp"

namespace hqrlab {

enum class TreeKind { FlatTree, BinaryTree, Greedy, Fibonacci };

std::string_view tree_name(TreeKind kind);  // "flat", "binary", "greedy", "fibonacci"
std::optional<TreeKind> parse_tree(std::string_view name);

/// (victim, killer) pair of row indices.
struct Kill {
    int victim;
    int killer;
    friend bool operator==(const Kill&, const Kill&) = default;
};

/// Shape of a single reduction over `n` positions where position 0 survives,
/// as (victim, killer) positions in firing order. Greedy is not static
/// (it depends on when rows become available) and is rejected here.
std::vector<Kill> static_reduction(TreeKind kind, int n);

/// Reduces `rows` (rows[0] survives) with `kind`, returning row pairs in list
/// order. Greedy pairs rows by their availability on `clock`; the clock is
/// only read, never advanced.
std::vector<Kill> reduce_rows(TreeKind kind, std::span<const int> rows, const UnitClock& clock);

/// Elimination list of the given tree applied to every panel, in panel-major
/// order, scheduled with unit_schedule. FlatTree is TS-flagged, the others TT.
/// Throws std::invalid_argument on a zero dimension.
EliminationList gen_tree(TreeKind kind, int mt, int nt);

}  // namespace hqrlab
