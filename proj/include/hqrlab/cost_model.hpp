#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "hqrlab/distribution.hpp"
#include "hqrlab/elimination.hpp"
#include "hqrlab/task_dag.hpp"

namespace hqrlab {

/// Task durations are kernel_weight × multiplier (b³/3 flop units); every
/// dataflow edge between different processes adds `message_cost` latency.
struct CostModel {
    std::array<double, 6> multiplier{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};  // indexed by KernelKind
    double message_cost = 0.0;

    /// TT kernels slowed down by the measured TS/TT update rate ratio (7.21 vs 6.28 GFlop/s).
    static CostModel measured(double message_cost);

    double duration(KernelKind kind) const;
};

/// Cross-process edges, counted once per (source task, destination process),
/// plus one write-back for every tile whose final writer runs away from the
/// tile's owner.
std::size_t count_dataflow_messages(const TaskDag& dag);

/// Panel-k communication count under the migrating-pivot model: each
/// elimination runs on the owner of its victim row; a tile that is not there
/// is shipped (one message) and stays where it was last used; finally every
/// tile away from its owner is sent home.
std::size_t migrating_pivot_comms(const EliminationList& list, const Distribution& dist, int k);

struct SimulatedTask {
    int task;
    int process;
    int core;
    double start;
    double end;
};

struct Simulation {
    double makespan = 0.0;
    std::vector<SimulatedTask> trace;  // in start order
};

/// List scheduling of `dag` on `procs` processes with `cores_per_proc` cores
/// each. A task is released once every predecessor finished, plus the message
/// cost for predecessors on another process; released tasks start on the
/// lowest free core of their process, highest bottom level first.
/// Throws std::invalid_argument when a task is placed on a process >= procs.
Simulation simulate_makespan(const TaskDag& dag, int procs, int cores_per_proc, const CostModel& model);

/// `task,process,core,start,end` CSV.
std::string simulation_csv(const TaskDag& dag, const Simulation& sim);

/// p·(1 − nt/(3·mt)). Throws std::invalid_argument when nt > mt or an argument is not positive.
double block_speedup_bound(int mt, int nt, int p);

}  // namespace hqrlab
