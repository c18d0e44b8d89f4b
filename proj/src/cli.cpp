#include "hqrlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hqrlab/cost_model.hpp"
#include "hqrlab/hqr.hpp"
#include "hqrlab/matrix_io.hpp"
#include "hqrlab/runtime.hpp"

namespace hqrlab {
namespace {

constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    int mt = 0;
    int nt = 0;
    int b = 4;
    int p = 1;
    int q = 1;
    int a = 1;
    std::string low = "greedy";
    std::string high = "fibonacci";
    bool domino = true;
    std::string dist;
    std::string tree;
    int workers = 1;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> random;
    std::string in;
    std::string out;
    std::string trace;
    std::string format;
    int procs = 0;
    int cores = 4;
    double message_cost = 6.0;
    bool measured = false;
};

void add_config_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "HQR config JSON file");
    cmd->add_option("--mt", o.mt, "tile rows")->check(CLI::PositiveNumber);
    cmd->add_option("--nt", o.nt, "tile columns")->check(CLI::PositiveNumber);
    cmd->add_option("--p", o.p, "clusters (process rows)")->check(CLI::PositiveNumber);
    cmd->add_option("--q", o.q, "process columns")->check(CLI::PositiveNumber);
    cmd->add_option("--a", o.a, "TS domain size")->check(CLI::PositiveNumber);
    cmd->add_option("--low", o.low, "low-level tree");
    cmd->add_option("--high", o.high, "high-level tree");
    cmd->add_flag("--domino,!--no-domino", o.domino, "domino chain between clusters");
    cmd->add_option("--dist", o.dist, "cyclic2d(P,Q) | cyclic1d(r) | block1d(r); default cyclic2d(p,q)");
}

TreeKind tree_or_throw(const std::string& name) {
    if (auto t = parse_tree(name)) return *t;
    throw UsageError("unknown tree '" + name + "' (flat, binary, greedy, fibonacci)");
}

bool given(const CLI::App* cmd, const char* flag) { return cmd->count(flag) > 0; }

// Config file first, explicit flags on top.
HqrConfig resolve_config(const CLI::App* cmd, const Options& o, bool shape_known) {
    HqrConfig cfg;
    bool dist_from_file = false;
    if (!o.config_path.empty()) {
        std::ifstream is(o.config_path);
        if (!is) throw UsageError("cannot open config " + o.config_path);
        std::stringstream text;
        text << is.rdbuf();
        cfg = config_from_json(text.str());
        dist_from_file = true;
    } else {
        cfg.low_tree = tree_or_throw(o.low);
        cfg.high_tree = tree_or_throw(o.high);
        cfg.domino = o.domino;
    }
    const bool shape_from_input = shape_known && o.config_path.empty();
    if (given(cmd, "--mt") || shape_from_input) cfg.mt = o.mt;
    if (given(cmd, "--nt") || shape_from_input) cfg.nt = o.nt;
    if (given(cmd, "--p")) cfg.p = o.p;
    if (given(cmd, "--q")) cfg.q = o.q;
    if (given(cmd, "--a")) cfg.a = o.a;
    if (given(cmd, "--low")) cfg.low_tree = tree_or_throw(o.low);
    if (given(cmd, "--high")) cfg.high_tree = tree_or_throw(o.high);
    if (given(cmd, "--domino")) cfg.domino = o.domino;
    if (o.config_path.empty() && !shape_known && (!given(cmd, "--mt") || !given(cmd, "--nt")))
        throw UsageError("--mt and --nt are required without --config");
    if (!o.dist.empty())
        cfg.dist = parse_distribution(o.dist);
    else if (!dist_from_file || given(cmd, "--p") || given(cmd, "--q"))
        cfg.dist = Distribution::cyclic2d(cfg.p, cfg.q);
    validate_config(cfg);
    return cfg;
}

// `--tree` selects a plain tree (gen_tree); otherwise the HQR config is used.
struct Plan {
    HqrConfig cfg;
    EliminationList list;
    std::string source;
};

// `shape_known`: o.mt/o.nt were filled from an input matrix.
Plan make_plan(const CLI::App* cmd, const Options& o, bool shape_known = false) {
    Plan plan;
    plan.cfg = resolve_config(cmd, o, shape_known);
    if (!o.tree.empty()) {
        plan.list = gen_tree(tree_or_throw(o.tree), plan.cfg.mt, plan.cfg.nt);
        plan.source = "tree:" + o.tree;
    } else {
        plan.list = gen_hqr(plan.cfg);
        plan.source = "hqr";
    }
    return plan;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream os(o.out);
    if (!os) throw UsageError("cannot open " + o.out + " for writing");
    os << text;
}

int cmd_table(const CLI::App* cmd, const Options& o, std::ostream& out) {
    const Plan plan = make_plan(cmd, o);
    if (o.format.empty() || o.format == "csv") {
        emit(o, out, table_csv(plan.list));
        return kExitOk;
    }
    if (o.format != "json") throw UsageError("table: --format must be csv or json");
    nlohmann::json rows = nlohmann::json::array();
    for (const Elimination& e : plan.list.elims)
        rows.push_back({{"row", e.row}, {"panel", e.panel}, {"killer", e.piv}, {"step", e.step},
                        {"kernel", e.family == KernelFamily::TS ? "TS" : "TT"}});
    const nlohmann::json j = {{"schema_version", kSchemaVersion}, {"source", plan.source}, {"eliminations", rows}};
    emit(o, out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_analyze(const CLI::App* cmd, const Options& o, std::ostream& out) {
    if (!o.format.empty() && o.format != "json") throw UsageError("analyze: --format must be json");
    const Plan plan = make_plan(cmd, o);
    const TaskDag dag = build_dag(plan.list, plan.cfg.dist);
    nlohmann::json comms = nlohmann::json::array();
    for (int k = 0; k < plan.list.panels(); ++k) comms.push_back(migrating_pivot_comms(plan.list, plan.cfg.dist, k));
    const int procs = o.procs > 0 ? o.procs : plan.cfg.dist.process_count();
    CostModel model = o.measured ? CostModel::measured(o.message_cost) : CostModel{};
    model.message_cost = o.message_cost;
    const Simulation sim = simulate_makespan(dag, procs, o.cores, model);
    const nlohmann::json j = {
        {"schema_version", kSchemaVersion},
        {"source", plan.source},
        {"config", nlohmann::json::parse(config_to_json(plan.cfg))},
        {"tasks", dag.tasks.size()},
        {"edges", dag.edge_count()},
        {"total_weight", total_weight(dag)},
        {"cp_unit", critical_path_unit(plan.list)},
        {"cp_weighted", critical_path_weighted(dag)},
        {"messages", count_dataflow_messages(dag)},
        {"pivot_comms", comms},
        {"makespan", sim.makespan},
        {"simulation", {{"procs", procs}, {"cores_per_proc", o.cores}, {"message_cost", model.message_cost},
                        {"measured", o.measured}}},
    };
    emit(o, out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_dag(const CLI::App* cmd, const Options& o, std::ostream& out) {
    const Plan plan = make_plan(cmd, o);
    const TaskDag dag = build_dag(plan.list, plan.cfg.dist);
    if (o.format.empty() || o.format == "dot") {
        emit(o, out, dag_to_dot(dag));
        return kExitOk;
    }
    if (o.format != "csv") throw UsageError("dag: --format must be dot or csv");
    const int procs = o.procs > 0 ? o.procs : plan.cfg.dist.process_count();
    CostModel model = o.measured ? CostModel::measured(o.message_cost) : CostModel{};
    model.message_cost = o.message_cost;
    emit(o, out, simulation_csv(dag, simulate_makespan(dag, procs, o.cores, model)));
    return kExitOk;
}

int worker_count(const Options& o) {
    const char* env = std::getenv("HQRLAB_THREADS");
    if (env == nullptr || *env == '\0') return o.workers;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw UsageError(std::string("HQRLAB_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<int>(v);
}

int cmd_factor(const CLI::App* cmd, const Options& o, std::ostream& out) {
    if (!o.format.empty() && o.format != "json") throw UsageError("factor: --format must be json");
    if (!o.in.empty() && o.random) throw UsageError("factor: --in and --random are exclusive");
    const int workers = worker_count(o);
    TileMatrix a;
    Options resolved = o;
    if (!o.in.empty()) {
        try {
            a = load_tqrm(o.in);
        } catch (const std::runtime_error& e) {
            throw UsageError(e.what());
        }
        // The matrix defines the shape unless the flags say otherwise.
        if (!given(cmd, "--mt")) resolved.mt = static_cast<int>(a.mt());
        if (!given(cmd, "--nt")) resolved.nt = static_cast<int>(a.nt());
    }
    const Plan plan = make_plan(cmd, resolved, !o.in.empty());
    if (o.in.empty()) a = make_random(plan.cfg.mt, plan.cfg.nt, o.b, o.random.value_or(o.seed));
    if (a.mt() != static_cast<std::size_t>(plan.cfg.mt) || a.nt() != static_cast<std::size_t>(plan.cfg.nt))
        throw UsageError("factor: matrix has " + std::to_string(a.mt()) + "x" + std::to_string(a.nt()) +
                         " tiles but the config asks for " + std::to_string(plan.cfg.mt) + "x" +
                         std::to_string(plan.cfg.nt));

    const DenseMatrix a0 = a.to_dense();
    const TaskDag dag = build_dag(plan.list, plan.cfg.dist);
    Factorization f = execute(a, dag, workers);
    const DenseMatrix q = build_q(f.store, plan.list, a.b());
    std::tie(f.report.orth_err, f.report.resid) = verify(a0, q, a.to_dense());
    const std::size_t n = a.cols();
    const bool pass = f.report.orth_err <= orth_threshold(n) && f.report.resid <= resid_threshold(n);

    if (!o.out.empty()) save_tqrm(o.out, a);
    if (!o.trace.empty()) {
        std::ofstream ts(o.trace);
        if (!ts) throw UsageError("cannot open " + o.trace + " for writing");
        ts << trace_csv(dag, f.report);
    }
    nlohmann::json counts;
    for (int k = 0; k < 6; ++k)
        counts[std::string(kernel_name(static_cast<KernelKind>(k)))] = f.report.kernel_counts[static_cast<std::size_t>(k)];
    const nlohmann::json j = {
        {"schema_version", kSchemaVersion},
        {"source", plan.source},
        {"config", nlohmann::json::parse(config_to_json(plan.cfg))},
        {"b", a.b()},
        {"workers", workers},
        {"elapsed_seconds", f.report.elapsed_seconds},
        {"tasks", f.report.task_count()},
        {"kernel_counts", counts},
        {"orth_err", f.report.orth_err},
        {"resid", f.report.resid},
        {"orth_threshold", orth_threshold(n)},
        {"resid_threshold", resid_threshold(n)},
        {"pass", pass},
    };
    out << j.dump(2) << "\n";
    return pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical tiled QR: elimination trees, task graphs, simulation and factorization", "hqrlab"};
    app.require_subcommand(1, 1);
    Options o;

    auto* table = app.add_subcommand("table", "killer/step table as row,panel,killer,step CSV");
    auto* factor = app.add_subcommand("factor", "factor a matrix and verify Q and R");
    auto* analyze = app.add_subcommand("analyze", "weights, critical paths, communication and simulated makespan");
    auto* dag = app.add_subcommand("dag", "task graph as DOT, or a simulated schedule as CSV");
    for (auto* cmd : {table, factor, analyze, dag}) {
        add_config_flags(cmd, o);
        cmd->add_option("--tree", o.tree, "plain tree instead of HQR: flat, binary, greedy, fibonacci");
        cmd->add_option("--format", o.format, "csv | json | dot, depending on the command");
        cmd->add_option("--out", o.out, factor == cmd ? "write the factored matrix (TQRM)" : "output file");
    }
    factor->add_option("--b", o.b, "tile size")->check(CLI::PositiveNumber);
    factor->add_option("--in", o.in, "input matrix (TQRM)");
    factor->add_option("--random", o.random, "factor a random matrix with this seed");
    factor->add_option("--seed", o.seed, "seed used when neither --in nor --random is given");
    factor->add_option("--workers", o.workers, "worker threads (HQRLAB_THREADS overrides)")->check(CLI::Range(1, 4096));
    factor->add_option("--trace", o.trace, "write the execution trace CSV");
    for (auto* cmd : {analyze, dag}) {
        cmd->add_option("--procs", o.procs, "simulated processes (default: the distribution's)")->check(CLI::NonNegativeNumber);
        cmd->add_option("--cores", o.cores, "cores per simulated process")->check(CLI::PositiveNumber);
        cmd->add_option("--message-cost", o.message_cost, "latency per cross-process edge")->check(CLI::NonNegativeNumber);
        cmd->add_flag("--measured", o.measured, "slow TT kernels down to the measured kernel rates");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (table->parsed()) return cmd_table(table, o, out);
        if (factor->parsed()) return cmd_factor(factor, o, out);
        if (analyze->parsed()) return cmd_analyze(analyze, o, out);
        return cmd_dag(dag, o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerificationFailed;
    }
}

}  // namespace hqrlab
