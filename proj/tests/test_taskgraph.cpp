#include <algorithm>
#include <set>

#include "doctest.h"
#include "hqrlab/cost_model.hpp"
#include "hqrlab/hqr.hpp"

using namespace hqrlab;

namespace {

const Distribution kOne = Distribution::cyclic2d(1, 1);

std::multiset<std::string> labels(const TaskDag& dag) {
    std::multiset<std::string> out;
    for (const Task& t : dag.tasks) out.insert(t.label());
    return out;
}

std::vector<EliminationList> tree_lists(int mt, int nt) {
    std::vector<EliminationList> out;
    for (TreeKind t : {TreeKind::FlatTree, TreeKind::BinaryTree, TreeKind::Greedy, TreeKind::Fibonacci})
        out.push_back(gen_tree(t, mt, nt));
    return out;
}

EliminationList flat_reordered_cyclic3() {
    EliminationList l{12, 1, {}};
    for (int i : {3, 6, 9, 1, 4, 7, 10, 2, 5, 8, 11}) l.elims.push_back({i, 0, 0, 0, KernelFamily::TS});
    return unit_schedule(l);
}

}  // namespace

TEST_CASE("smallest task graphs") {
    const TaskDag ts = build_dag(gen_tree(TreeKind::FlatTree, 2, 1), kOne);
    CHECK(labels(ts) == std::multiset<std::string>{"GEQRT(0,-,0,-)@P0", "TSQRT(1,0,0,-)@P0"});
    CHECK(ts.edge_count() == 1);
    CHECK(total_weight(ts) == 10);
    CHECK(critical_path_weighted(ts) == 10);

    const TaskDag ts2 = build_dag(gen_tree(TreeKind::FlatTree, 2, 2), kOne);
    CHECK(labels(ts2) == std::multiset<std::string>{"GEQRT(0,-,0,-)@P0", "UNMQR(0,-,0,1)@P0", "TSQRT(1,0,0,-)@P0",
                                                    "TSMQR(1,0,0,1)@P0", "GEQRT(1,-,1,-)@P0"});
    CHECK(total_weight(ts2) == 32);
    CHECK(critical_path_weighted(ts2) > critical_path_weighted(ts));

    const TaskDag tt = build_dag(gen_tree(TreeKind::BinaryTree, 2, 1), kOne);
    CHECK(labels(tt) == std::multiset<std::string>{"GEQRT(0,-,0,-)@P0", "GEQRT(1,-,0,-)@P0", "TTQRT(1,0,0,-)@P0"});
    CHECK(total_weight(tt) == 10);

    CHECK(total_weight(build_dag(gen_tree(TreeKind::Greedy, 1, 1), kOne)) == 4);
    for (const EliminationList& l : tree_lists(12, 1)) CHECK(total_weight(build_dag(l, kOne)) == 70);
}

TEST_CASE("build_dag rejects unflagged and invalid lists") {
    EliminationList l{2, 1, {{1, 0, 0, 1, KernelFamily::Unset}}};
    CHECK_THROWS_AS(build_dag(l, kOne), std::invalid_argument);
    EliminationList missing{3, 1, {{1, 0, 0, 1, KernelFamily::TT}}};
    CHECK_THROWS_AS(build_dag(missing, kOne), InvalidEliminationList);
}

TEST_CASE("weights, kernel counts and GEQRT deduplication over trees and HQR") {
    auto check = [](const EliminationList& l) {
        const TaskDag dag = build_dag(l, kOne);
        CHECK(total_weight(dag) == expected_total_weight(l.mt, l.nt));
        CHECK(topological_order(dag).size() == dag.tasks.size());
        std::size_t factors = 0;
        for (const Task& t : dag.tasks) factors += t.kind == KernelKind::TSQRT || t.kind == KernelKind::TTQRT;
        CHECK(static_cast<long long>(factors) == subdiagonal_tiles(l.mt, l.nt));
        // GEQRT(·, k): every row touched by a TT elimination, every TS killer, and the panel root.
        for (int k = 0; k < l.panels(); ++k) {
            std::set<int> rows{k};
            for (const Elimination& e : l.elims) {
                if (e.panel != k) continue;
                rows.insert(e.piv);
                if (e.family == KernelFamily::TT) rows.insert(e.row);
            }
            const auto geqrt = std::ranges::count_if(
                dag.tasks, [&](const Task& t) { return t.kind == KernelKind::GEQRT && t.panel == k; });
            CHECK(static_cast<std::size_t>(geqrt) == rows.size());
        }
    };
    for (int mt = 1; mt <= 9; ++mt)
        for (int nt = 1; nt <= 6; ++nt) {
            for (const EliminationList& l : tree_lists(mt, nt)) check(l);
            HqrConfig c;
            c.mt = mt;
            c.nt = nt;
            c.p = 2;
            c.a = 2;
            c.low_tree = TreeKind::Greedy;
            c.high_tree = TreeKind::BinaryTree;
            c.domino = true;
            check(gen_hqr(c));
        }
    CHECK(expected_total_weight(1, 2) == 10);
    CHECK(expected_total_weight(2, 2) == 32);
}

TEST_CASE("GEQRT counts enumerated by hand for mt <= 4") {
    auto count = [](const EliminationList& l, int k) {
        const TaskDag dag = build_dag(l, kOne);
        return std::ranges::count_if(dag.tasks,
                                     [&](const Task& t) { return t.kind == KernelKind::GEQRT && t.panel == k; });
    };
    // Flat TS: only the root is factored by GEQRT.
    CHECK(count(gen_tree(TreeKind::FlatTree, 4, 2), 0) == 1);
    CHECK(count(gen_tree(TreeKind::FlatTree, 4, 2), 1) == 1);
    // Binary TT on 4 rows: all 4 rows in panel 0, rows 1..3 in panel 1.
    CHECK(count(gen_tree(TreeKind::BinaryTree, 4, 2), 0) == 4);
    CHECK(count(gen_tree(TreeKind::BinaryTree, 4, 2), 1) == 3);
    // 3 tile rows, 3 columns: panel 2 has no elimination but its root is factored.
    CHECK(count(gen_tree(TreeKind::Greedy, 3, 3), 2) == 1);
}

TEST_CASE("edges respect every tile access order") {
    const TaskDag dag = build_dag(gen_tree(TreeKind::Greedy, 6, 4), kOne);
    for (std::size_t t = 0; t < dag.tasks.size(); ++t)
        for (int p : dag.predecessors[t]) CHECK(static_cast<std::size_t>(p) < t);
    const std::string dot = dag_to_dot(dag);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("[label=\"GEQRT(0,-,0,-)@P0\"]") != std::string::npos);
    CHECK(dot.find("xproc=false") != std::string::npos);
    CHECK(dot.find("xproc=true") == std::string::npos);
}

TEST_CASE("task placement follows the written tile") {
    const TaskDag dag = build_dag(gen_tree(TreeKind::FlatTree, 4, 3), Distribution::cyclic2d(2, 3));
    for (const Task& t : dag.tasks) {
        const int col = t.col < 0 ? t.panel : t.col;
        CHECK(t.process == owner(dag.dist, t.row, col, 4, 3));
    }
}

TEST_CASE("dataflow messages") {
    for (const EliminationList& l : tree_lists(7, 3)) CHECK(count_dataflow_messages(build_dag(l, kOne)) == 0);
    CHECK(count_dataflow_messages(build_dag(gen_tree(TreeKind::FlatTree, 2, 1), Distribution::cyclic1d(2))) == 2);

    HqrConfig c;
    c.mt = 8;
    c.nt = 2;
    c.p = 2;
    c.a = 2;
    c.low_tree = TreeKind::Greedy;
    c.high_tree = TreeKind::Greedy;
    c.domino = true;
    c.dist = Distribution::cyclic2d(2, 1);
    const auto hqr = count_dataflow_messages(build_dag(gen_hqr(c), c.dist));
    const auto greedy = count_dataflow_messages(build_dag(gen_tree(TreeKind::Greedy, 8, 2), c.dist));
    CHECK(hqr <= greedy);
}

TEST_CASE("migrating pivot communications") {
    const EliminationList flat = gen_tree(TreeKind::FlatTree, 12, 1);
    CHECK(migrating_pivot_comms(flat, Distribution::block1d(3), 0) == 3);
    CHECK(migrating_pivot_comms(flat, Distribution::cyclic1d(3), 0) == 12);
    CHECK(migrating_pivot_comms(flat_reordered_cyclic3(), Distribution::cyclic1d(3), 0) == 3);
    CHECK(migrating_pivot_comms(flat, Distribution::cyclic1d(1), 0) == 0);
    CHECK(migrating_pivot_comms(flat, Distribution::block1d(3), 1) == 0);
}

TEST_CASE("simulated makespan bounds") {
    for (const EliminationList& l : tree_lists(8, 4)) {
        const TaskDag dag = build_dag(l, kOne);
        const CostModel unit;
        CHECK(simulate_makespan(dag, 1, 1, unit).makespan == total_weight(dag));
        const Simulation wide = simulate_makespan(dag, 1, static_cast<int>(dag.tasks.size()), unit);
        CHECK(wide.makespan == critical_path_weighted(dag));
        CHECK(wide.trace.size() == dag.tasks.size());
    }
    const TaskDag placed = build_dag(gen_tree(TreeKind::Greedy, 8, 4), Distribution::cyclic1d(4));
    CHECK_THROWS_AS(simulate_makespan(placed, 2, 2, CostModel{}), std::invalid_argument);
}

TEST_CASE("simulation respects dependencies, message delays and core limits") {
    const TaskDag dag = build_dag(gen_tree(TreeKind::BinaryTree, 10, 4), Distribution::cyclic1d(3));
    CostModel model;
    model.message_cost = 6.0;
    const Simulation sim = simulate_makespan(dag, 3, 2, model);
    std::vector<const SimulatedTask*> by_task(dag.tasks.size());
    for (const SimulatedTask& s : sim.trace) by_task[static_cast<std::size_t>(s.task)] = &s;
    for (std::size_t t = 0; t < dag.tasks.size(); ++t) {
        REQUIRE(by_task[t] != nullptr);
        CHECK(by_task[t]->end - by_task[t]->start == kernel_weight(dag.tasks[t].kind));
        for (int p : dag.predecessors[t]) {
            const double delay = dag.tasks[static_cast<std::size_t>(p)].process == dag.tasks[t].process ? 0.0 : 6.0;
            CHECK(by_task[t]->start >= by_task[static_cast<std::size_t>(p)]->end + delay);
        }
    }
    for (const SimulatedTask& a : sim.trace)
        for (const SimulatedTask& b : sim.trace)
            if (&a != &b && a.process == b.process && a.core == b.core)
                CHECK((a.end <= b.start || b.end <= a.start));
    CHECK(simulation_csv(dag, sim).rfind("task,process,core,start,end\n", 0) == 0);
    CHECK(simulate_makespan(dag, 3, 2, model).makespan == sim.makespan);
}

TEST_CASE("measured cost model slows TT kernels only") {
    const CostModel m = CostModel::measured(2.0);
    CHECK(m.message_cost == 2.0);
    CHECK(m.duration(KernelKind::TSMQR) == 12.0);
    CHECK(m.duration(KernelKind::TTMQR) == doctest::Approx(6.0 * 7.21 / 6.28));
    CHECK(m.duration(KernelKind::TTQRT) > 2.0);
}

TEST_CASE("block speedup bound") {
    for (int p = 1; p <= 16; ++p) CHECK(block_speedup_bound(9, 9, p) == 2.0 * p / 3.0);
    CHECK(block_speedup_bound(12, 3, 4) == 11.0 / 3.0);
    CHECK(block_speedup_bound(3000, 1, 8) == doctest::Approx(8.0).epsilon(1.0 / 9000.0 + 1e-12));
    CHECK_THROWS_AS(block_speedup_bound(3, 4, 2), std::invalid_argument);
    CHECK_THROWS_AS(block_speedup_bound(3, 1, 0), std::invalid_argument);
}
