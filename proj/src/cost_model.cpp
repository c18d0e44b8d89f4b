#include "hqrlab/cost_model.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hqrlab {

CostModel CostModel::measured(double message_cost) {
    CostModel m;
    const double tt_slowdown = 7.21 / 6.28;
    m.multiplier[static_cast<std::size_t>(KernelKind::TTQRT)] = tt_slowdown;
    m.multiplier[static_cast<std::size_t>(KernelKind::TTMQR)] = tt_slowdown;
    m.message_cost = message_cost;
    return m;
}

double CostModel::duration(KernelKind kind) const {
    return kernel_weight(kind) * multiplier[static_cast<std::size_t>(kind)];
}

std::size_t count_dataflow_messages(const TaskDag& dag) {
    std::set<std::pair<int, int>> sends;  // (source task, destination process)
    for (std::size_t t = 0; t < dag.tasks.size(); ++t)
        for (int s : dag.successors[t]) {
            const int dest = dag.tasks[static_cast<std::size_t>(s)].process;
            if (dest != dag.tasks[t].process) sends.emplace(static_cast<int>(t), dest);
        }
    std::size_t write_backs = 0;
    for (const TileHome& tile : dag.tiles)
        if (dag.tasks[static_cast<std::size_t>(tile.last_writer)].process != tile.owner) ++write_backs;
    return sends.size() + write_backs;
}

std::size_t migrating_pivot_comms(const EliminationList& list, const Distribution& dist, int k) {
    std::map<int, int> location;
    auto where = [&](int row) {
        auto [it, inserted] = location.try_emplace(row, owner(dist, row, k, list.mt, list.nt));
        return it;
    };
    std::size_t messages = 0;
    for (const Elimination& e : list.elims) {
        if (e.panel != k) continue;
        const int exec = owner(dist, e.row, k, list.mt, list.nt);
        for (int row : {e.row, e.piv}) {
            auto it = where(row);
            if (it->second != exec) {
                ++messages;
                it->second = exec;
            }
        }
    }
    for (const auto& [row, loc] : location)
        if (loc != owner(dist, row, k, list.mt, list.nt)) ++messages;
    return messages;
}

Simulation simulate_makespan(const TaskDag& dag, int procs, int cores_per_proc, const CostModel& model) {
    if (procs < 1 || cores_per_proc < 1) throw std::invalid_argument("simulate_makespan: need at least one core");
    const std::size_t n = dag.tasks.size();
    std::vector<double> duration(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (dag.tasks[t].process >= procs)
            throw std::invalid_argument("simulate_makespan: task placed on process " +
                                        std::to_string(dag.tasks[t].process) + " but only " + std::to_string(procs) +
                                        " simulated");
        duration[t] = model.duration(dag.tasks[t].kind);
    }
    const std::vector<double> priority = bottom_levels(dag, duration);

    // Released tasks per process ordered by (higher bottom level, lower id).
    auto by_priority = [&](int a, int b) {
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        if (priority[ua] != priority[ub]) return priority[ua] > priority[ub];
        return a < b;
    };
    std::vector<std::set<int, decltype(by_priority)>> released(static_cast<std::size_t>(procs),
                                                               std::set<int, decltype(by_priority)>(by_priority));
    using Timed = std::pair<double, int>;
    std::priority_queue<Timed, std::vector<Timed>, std::greater<>> pending;  // (release time, task)
    std::priority_queue<Timed, std::vector<Timed>, std::greater<>> running;  // (end time, task)
    std::vector<std::vector<double>> core_free(static_cast<std::size_t>(procs),
                                               std::vector<double>(static_cast<std::size_t>(cores_per_proc), 0.0));
    std::vector<int> waiting(n);
    std::vector<double> release(n, 0.0);
    std::vector<double> finish(n, 0.0);
    std::vector<int> core_of(n, -1);

    for (std::size_t t = 0; t < n; ++t) {
        waiting[t] = static_cast<int>(dag.predecessors[t].size());
        if (waiting[t] == 0) pending.emplace(0.0, static_cast<int>(t));
    }

    Simulation sim;
    double now = 0.0;
    std::size_t done = 0;
    while (done < n) {
        while (!pending.empty() && pending.top().first <= now) {
            const int t = pending.top().second;
            pending.pop();
            released[static_cast<std::size_t>(dag.tasks[static_cast<std::size_t>(t)].process)].insert(t);
        }
        for (int p = 0; p < procs; ++p) {
            auto& queue = released[static_cast<std::size_t>(p)];
            auto& cores = core_free[static_cast<std::size_t>(p)];
            while (!queue.empty()) {
                auto free = std::ranges::find_if(cores, [&](double at) { return at <= now; });
                if (free == cores.end()) break;
                const int t = *queue.begin();
                queue.erase(queue.begin());
                const auto ut = static_cast<std::size_t>(t);
                const double end = now + duration[ut];
                *free = end;
                core_of[ut] = static_cast<int>(free - cores.begin());
                running.emplace(end, t);
                sim.trace.push_back({t, p, core_of[ut], now, end});
            }
        }
        double next = std::numeric_limits<double>::infinity();
        if (!running.empty()) next = running.top().first;
        if (!pending.empty()) next = std::min(next, pending.top().first);
        if (next == std::numeric_limits<double>::infinity()) throw std::logic_error("simulate_makespan: deadlock");
        now = next;
        while (!running.empty() && running.top().first <= now) {
            const int t = running.top().second;
            running.pop();
            const auto ut = static_cast<std::size_t>(t);
            finish[ut] = now;
            ++done;
            sim.makespan = std::max(sim.makespan, now);
            for (int s : dag.successors[ut]) {
                const auto us = static_cast<std::size_t>(s);
                const double latency = dag.tasks[us].process != dag.tasks[ut].process ? model.message_cost : 0.0;
                release[us] = std::max(release[us], now + latency);
                if (--waiting[us] == 0) pending.emplace(release[us], s);
            }
        }
    }
    return sim;
}

std::string simulation_csv(const TaskDag& dag, const Simulation& sim) {
    std::ostringstream os;
    os << "task,process,core,start,end\n";
    for (const SimulatedTask& s : sim.trace)
        os << dag.tasks[static_cast<std::size_t>(s.task)].label() << ',' << s.process << ',' << s.core << ',' << s.start
           << ',' << s.end << '\n';
    return os.str();
}

double block_speedup_bound(int mt, int nt, int p) {
    if (mt < 1 || nt < 1 || p < 1) throw std::invalid_argument("block_speedup_bound: arguments must be positive");
    if (nt > mt) throw std::invalid_argument("block_speedup_bound: requires nt <= mt");
    // Integer numerator and denominator give the correctly rounded quotient.
    return static_cast<double>(p) * (3.0 * mt - nt) / (3.0 * mt);
}

}  // namespace hqrlab
