#include "hqrlab/task_dag.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hqrlab {
namespace {

class DagBuilder {
public:
    DagBuilder(const EliminationList& list, const Distribution& dist)
        : list_(list), dist_(dist), tile_writer_(static_cast<std::size_t>(list.mt * list.nt), -1),
          tile_readers_(static_cast<std::size_t>(list.mt * list.nt)) {
        dag_.mt = list.mt;
        dag_.nt = list.nt;
        dag_.dist = dist;
    }

    TaskDag build() {
        for (const Elimination& e : list_.elims) {
            if (e.family == KernelFamily::Unset)
                throw std::invalid_argument("build_dag: elimination without TS/TT kernel flag");
            elimination(e);
        }
        // Panels whose root kills nothing (the last one when mt <= nt) still factor their diagonal.
        for (int k = 0; k < list_.panels(); ++k) ensure_panel(k, k);
        finish();
        return std::move(dag_);
    }

private:
    struct Access {
        int item;
        bool write;
    };

    int tile_item(int i, int j) const { return i * list_.nt + j; }

    int new_reflector_item() {
        tile_writer_.push_back(-1);
        tile_readers_.emplace_back();
        return static_cast<int>(tile_writer_.size()) - 1;
    }

    int place(int i, int j) const { return owner(dist_, i, j, list_.mt, list_.nt); }

    void add_task(Task task, std::initializer_list<Access> accesses) {
        const int id = static_cast<int>(dag_.tasks.size());
        dag_.tasks.push_back(task);
        dag_.predecessors.emplace_back();
        auto& preds = dag_.predecessors.back();
        for (const Access& a : accesses) {
            auto& writer = tile_writer_[static_cast<std::size_t>(a.item)];
            auto& readers = tile_readers_[static_cast<std::size_t>(a.item)];
            if (writer >= 0) preds.push_back(writer);
            if (a.write) {
                preds.insert(preds.end(), readers.begin(), readers.end());
                readers.clear();
                writer = id;
            } else {
                readers.push_back(id);
            }
        }
        std::ranges::sort(preds);
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    }

    void ensure_panel(int row, int k) {
        if (!factored_.emplace(row, k).second) return;
        const int refl = new_reflector_item();
        add_task({KernelKind::GEQRT, row, -1, k, -1, place(row, k)}, {{tile_item(row, k), true}, {refl, true}});
        for (int j = k + 1; j < list_.nt; ++j)
            add_task({KernelKind::UNMQR, row, -1, k, j, place(row, j)}, {{refl, false}, {tile_item(row, j), true}});
    }

    void elimination(const Elimination& e) {
        const bool ts = e.family == KernelFamily::TS;
        ensure_panel(e.piv, e.panel);
        if (!ts) ensure_panel(e.row, e.panel);
        const KernelKind factor = ts ? KernelKind::TSQRT : KernelKind::TTQRT;
        const KernelKind update = ts ? KernelKind::TSMQR : KernelKind::TTMQR;
        const int refl = new_reflector_item();
        add_task({factor, e.row, e.piv, e.panel, -1, place(e.row, e.panel)},
                 {{tile_item(e.piv, e.panel), true}, {tile_item(e.row, e.panel), true}, {refl, true}});
        for (int j = e.panel + 1; j < list_.nt; ++j)
            add_task({update, e.row, e.piv, e.panel, j, place(e.row, j)},
                     {{refl, false}, {tile_item(e.piv, j), true}, {tile_item(e.row, j), true}});
    }

    void finish() {
        dag_.successors.assign(dag_.tasks.size(), {});
        for (std::size_t t = 0; t < dag_.tasks.size(); ++t)
            for (int p : dag_.predecessors[t]) dag_.successors[static_cast<std::size_t>(p)].push_back(static_cast<int>(t));
        for (int i = 0; i < list_.mt; ++i)
            for (int j = 0; j < list_.nt; ++j) {
                const int w = tile_writer_[static_cast<std::size_t>(tile_item(i, j))];
                if (w >= 0) dag_.tiles.push_back({i, j, place(i, j), w});
            }
    }

    const EliminationList& list_;
    const Distribution& dist_;
    TaskDag dag_;
    std::vector<int> tile_writer_;
    std::vector<std::vector<int>> tile_readers_;
    std::set<std::pair<int, int>> factored_;
};

}  // namespace

std::string Task::label() const {
    auto field = [](int v) { return v < 0 ? std::string("-") : std::to_string(v); };
    std::ostringstream os;
    os << kernel_name(kind) << '(' << row << ',' << field(piv) << ',' << panel << ',' << field(col) << ")@P" << process;
    return os.str();
}

std::size_t TaskDag::edge_count() const {
    std::size_t n = 0;
    for (const auto& s : successors) n += s.size();
    return n;
}

TaskDag build_dag(const EliminationList& list, const Distribution& dist) {
    if (auto violations = validate_list(list); !violations.empty())
        throw InvalidEliminationList(std::move(violations));
    return DagBuilder(list, dist).build();
}

std::int64_t total_weight(const TaskDag& dag) {
    std::int64_t w = 0;
    for (const Task& t : dag.tasks) w += kernel_weight(t.kind);
    return w;
}

std::int64_t expected_total_weight(int mt, int nt) {
    const std::int64_t m = std::max(mt, nt);
    const std::int64_t n = std::min(mt, nt);
    return 6 * m * n * n - 2 * n * n * n;
}

std::vector<int> topological_order(const TaskDag& dag) {
    const std::size_t n = dag.tasks.size();
    std::vector<int> indegree(n);
    for (std::size_t t = 0; t < n; ++t) indegree[t] = static_cast<int>(dag.predecessors[t].size());
    std::vector<int> order;
    order.reserve(n);
    for (std::size_t t = 0; t < n; ++t)
        if (indegree[t] == 0) order.push_back(static_cast<int>(t));
    for (std::size_t head = 0; head < order.size(); ++head)
        for (int s : dag.successors[static_cast<std::size_t>(order[head])])
            if (--indegree[static_cast<std::size_t>(s)] == 0) order.push_back(s);
    if (order.size() != n) throw std::logic_error("task graph contains a cycle");
    return order;
}

std::int64_t critical_path_weighted(const TaskDag& dag) {
    std::vector<std::int64_t> finish(dag.tasks.size(), 0);
    std::int64_t cp = 0;
    for (int t : topological_order(dag)) {
        std::int64_t start = 0;
        for (int p : dag.predecessors[static_cast<std::size_t>(t)]) start = std::max(start, finish[static_cast<std::size_t>(p)]);
        finish[static_cast<std::size_t>(t)] = start + kernel_weight(dag.tasks[static_cast<std::size_t>(t)].kind);
        cp = std::max(cp, finish[static_cast<std::size_t>(t)]);
    }
    return cp;
}

std::vector<double> bottom_levels(const TaskDag& dag, const std::vector<double>& durations) {
    std::vector<double> level(dag.tasks.size(), 0.0);
    const std::vector<int> order = topological_order(dag);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto t = static_cast<std::size_t>(*it);
        double tail = 0.0;
        for (int s : dag.successors[t]) tail = std::max(tail, level[static_cast<std::size_t>(s)]);
        level[t] = durations[t] + tail;
    }
    return level;
}

std::string dag_to_dot(const TaskDag& dag) {
    std::ostringstream os;
    os << "digraph tasks {\n";
    for (std::size_t t = 0; t < dag.tasks.size(); ++t)
        os << "  t" << t << " [label=\"" << dag.tasks[t].label() << "\"];\n";
    for (std::size_t t = 0; t < dag.tasks.size(); ++t)
        for (int s : dag.successors[t]) {
            const bool xproc = dag.tasks[t].process != dag.tasks[static_cast<std::size_t>(s)].process;
            os << "  t" << t << " -> t" << s << " [xproc=" << (xproc ? "true" : "false") << "];\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace hqrlab
