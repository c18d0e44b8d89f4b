#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hqrlab/distribution.hpp"
#include "hqrlab/elimination.hpp"
#include "hqrlab/kernels.hpp"

namespace hqrlab {

/// One kernel invocation. GEQRT/UNMQR act on a single tile row (`row`, piv = -1);
/// the pair kernels act on victim `row` and killer `piv`. `col` is the updated
/// tile column for update kernels and -1 for factor kernels.
struct Task {
    KernelKind kind;
    int row;
    int piv;
    int panel;
    int col;
    int process;

    std::string label() const;  // KIND(i,piv,k,j)@Pn
};

/// Where a tile ends up after the factorization relative to its home process.
struct TileHome {
    int row;
    int col;
    int owner;
    int last_writer;  // task index, -1 if never written
};

/// Kernel-level task graph. Tasks are stored in canonical order (the order
/// the elimination list generates them), which is a topological order.
struct TaskDag {
    int mt = 0;
    int nt = 0;
    Distribution dist = Distribution::cyclic2d(1, 1);
    std::vector<Task> tasks;
    std::vector<std::vector<int>> successors;
    std::vector<std::vector<int>> predecessors;
    std::vector<TileHome> tiles;  // tiles touched by at least one task

    std::size_t edge_count() const;
};

/// Expands every elimination into its TS or TT kernel sequence, deduplicating
/// GEQRT/UNMQR per (row, panel), and adds read-after-write, write-after-read
/// and write-after-write edges between consecutive accessors of each tile and
/// each reflector. Throws std::invalid_argument when an elimination has no
/// kernel family, InvalidEliminationList when the list is invalid.
TaskDag build_dag(const EliminationList& list, const Distribution& dist);

std::int64_t total_weight(const TaskDag& dag);

/// 6·m·n² − 2·n³ with n = min(mt, nt) and m = max(mt, nt).
std::int64_t expected_total_weight(int mt, int nt);

/// Kahn order; throws std::logic_error when the graph has a cycle.
std::vector<int> topological_order(const TaskDag& dag);

/// Longest path, task weights summed along edges.
std::int64_t critical_path_weighted(const TaskDag& dag);

/// Longest weighted path from each task to a sink, the task itself included.
std::vector<double> bottom_levels(const TaskDag& dag, const std::vector<double>& durations);

/// Graphviz rendering; edges carry xproc=true|false.
std::string dag_to_dot(const TaskDag& dag);

}  // namespace hqrlab
