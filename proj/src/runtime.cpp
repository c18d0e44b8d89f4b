#include "hqrlab/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hqrlab {
namespace {

using Clock = std::chrono::steady_clock;

void run_task(const Task& t, TileMatrix& a, ReflectorStore& store) {
    const auto i = static_cast<std::size_t>(t.row);
    const auto k = static_cast<std::size_t>(t.panel);
    const auto p = static_cast<std::size_t>(t.piv);
    const auto j = static_cast<std::size_t>(t.col);
    switch (t.kind) {
        case KernelKind::GEQRT: store.put_panel(t.row, t.panel, geqrt(a.tile(i, k))); break;
        case KernelKind::UNMQR: unmqr(store.panel(t.row, t.panel), a.tile(i, j)); break;
        case KernelKind::TSQRT: store.put_elimination(t.row, t.piv, t.panel, tsqrt(a.tile(p, k), a.tile(i, k))); break;
        case KernelKind::TSMQR: tsmqr(store.elimination(t.row, t.piv, t.panel), a.tile(p, j), a.tile(i, j)); break;
        case KernelKind::TTQRT: store.put_elimination(t.row, t.piv, t.panel, ttqrt(a.tile(p, k), a.tile(i, k))); break;
        case KernelKind::TTMQR: ttmqr(store.elimination(t.row, t.piv, t.panel), a.tile(p, j), a.tile(i, j)); break;
    }
}

// Ready tasks ordered by larger bottom level, then lower id.
class ReadyQueue {
public:
    explicit ReadyQueue(const std::vector<double>* priority) : queue_(Less{priority}) {}
    void push(int t) { queue_.push(t); }
    bool empty() const { return queue_.empty(); }
    int pop() {
        const int t = queue_.top();
        queue_.pop();
        return t;
    }

private:
    struct Less {
        const std::vector<double>* priority;
        bool operator()(int a, int b) const {
            const double pa = (*priority)[static_cast<std::size_t>(a)];
            const double pb = (*priority)[static_cast<std::size_t>(b)];
            if (pa != pb) return pa < pb;
            return a > b;
        }
    };
    std::priority_queue<int, std::vector<int>, Less> queue_;
};

class Pool {
public:
    Pool(TileMatrix& a, const TaskDag& dag, ReflectorStore& store, int workers)
        : a_(a), dag_(dag), store_(store), remaining_(dag.tasks.size()) {
        std::vector<double> weights(dag.tasks.size());
        for (std::size_t t = 0; t < weights.size(); ++t) weights[t] = kernel_weight(dag.tasks[t].kind);
        priority_ = bottom_levels(dag, weights);
        waiting_.resize(dag.tasks.size());
        for (int w = 0; w < workers; ++w) queues_.emplace_back(&priority_);
        int next = 0;
        for (std::size_t t = 0; t < dag.tasks.size(); ++t) {
            waiting_[t] = static_cast<int>(dag.predecessors[t].size());
            if (waiting_[t] == 0) queues_[static_cast<std::size_t>(next++ % workers)].push(static_cast<int>(t));
        }
    }

    std::vector<TraceEntry> run() {
        start_ = Clock::now();
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < queues_.size(); ++w) threads.emplace_back([this, w] { work(static_cast<int>(w)); });
        for (auto& th : threads) th.join();
        if (error_) std::rethrow_exception(error_);
        return std::move(trace_);
    }

private:
    // Own queue first (successors of the last task run here), otherwise steal.
    bool take(int w, int& task) {
        auto& own = queues_[static_cast<std::size_t>(w)];
        if (!own.empty()) {
            task = own.pop();
            return true;
        }
        for (std::size_t off = 1; off < queues_.size(); ++off) {
            auto& victim = queues_[(static_cast<std::size_t>(w) + off) % queues_.size()];
            if (!victim.empty()) {
                task = victim.pop();
                return true;
            }
        }
        return false;
    }

    void work(int w) {
        std::unique_lock lock(mutex_);
        for (;;) {
            int task = -1;
            cv_.wait(lock, [&] { return remaining_ == 0 || error_ || take(w, task); });
            if (task < 0) return;
            lock.unlock();
            const auto t0 = Clock::now();
            std::exception_ptr failure;
            try {
                run_task(dag_.tasks[static_cast<std::size_t>(task)], a_, store_);
            } catch (...) {
                failure = std::current_exception();
            }
            const auto t1 = Clock::now();
            lock.lock();
            if (failure) {
                if (!error_) error_ = failure;
                cv_.notify_all();
                return;
            }
            trace_.push_back({task, w, ns(t0), ns(t1)});
            --remaining_;
            int released = 0;
            for (int s : dag_.successors[static_cast<std::size_t>(task)])
                if (--waiting_[static_cast<std::size_t>(s)] == 0) {
                    queues_[static_cast<std::size_t>(w)].push(s);
                    ++released;
                }
            if (remaining_ == 0 || released > 0) cv_.notify_all();
        }
    }

    std::int64_t ns(Clock::time_point t) const {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(t - start_).count();
    }

    TileMatrix& a_;
    const TaskDag& dag_;
    ReflectorStore& store_;
    std::vector<double> priority_;
    std::vector<int> waiting_;
    std::vector<ReadyQueue> queues_;
    std::vector<TraceEntry> trace_;
    std::size_t remaining_;
    std::exception_ptr error_;
    std::mutex mutex_;
    std::condition_variable cv_;
    Clock::time_point start_;
};

}  // namespace

std::size_t ExecutionReport::task_count() const {
    return std::accumulate(kernel_counts.begin(), kernel_counts.end(), std::size_t{0});
}

Factorization execute(TileMatrix& a, const TaskDag& dag, int workers) {
    if (workers < 1) throw std::invalid_argument("execute: workers must be >= 1");
    if (a.mt() != static_cast<std::size_t>(dag.mt) || a.nt() != static_cast<std::size_t>(dag.nt))
        throw std::invalid_argument("execute: matrix is " + std::to_string(a.mt()) + "x" + std::to_string(a.nt()) +
                                    " tiles, task graph expects " + std::to_string(dag.mt) + "x" +
                                    std::to_string(dag.nt));
    Factorization f;
    for (const Task& t : dag.tasks) {
        if (t.kind == KernelKind::GEQRT) f.store.reserve_panel(t.row, t.panel);
        if (t.kind == KernelKind::TSQRT || t.kind == KernelKind::TTQRT)
            f.store.reserve_elimination(t.row, t.piv, t.panel);
        ++f.report.kernel_counts[static_cast<std::size_t>(t.kind)];
    }
    f.store.seal();
    const auto t0 = Clock::now();
    f.report.trace = Pool(a, dag, f.store, workers).run();
    f.report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return f;
}

std::string trace_csv(const TaskDag& dag, const ExecutionReport& report) {
    std::ostringstream os;
    os << "task,kind,i,piv,k,j,worker,start_ns,end_ns\n";
    for (const TraceEntry& e : report.trace) {
        const Task& t = dag.tasks[static_cast<std::size_t>(e.task)];
        os << e.task << ',' << kernel_name(t.kind) << ',' << t.row << ',' << t.piv << ',' << t.panel << ',' << t.col
           << ',' << e.worker << ',' << e.start_ns << ',' << e.end_ns << '\n';
    }
    return os.str();
}

DenseMatrix build_q(const ReflectorStore& store, const EliminationList& list, std::size_t b) {
    const std::size_t mt = static_cast<std::size_t>(list.mt);
    const std::size_t qt = static_cast<std::size_t>(list.panels());
    TileMatrix q = make_identity(mt, qt, b);
    const TaskDag dag = build_dag(list, Distribution::cyclic2d(1, 1));
    for (auto it = dag.tasks.rbegin(); it != dag.tasks.rend(); ++it) {
        if (!is_factor_kernel(it->kind)) continue;
        const auto i = static_cast<std::size_t>(it->row);
        const auto p = static_cast<std::size_t>(it->piv);
        for (std::size_t j = 0; j < qt; ++j) {
            switch (it->kind) {
                case KernelKind::GEQRT: unmqr(store.panel(it->row, it->panel), q.tile(i, j), Op::NoTrans); break;
                case KernelKind::TSQRT:
                    tsmqr(store.elimination(it->row, it->piv, it->panel), q.tile(p, j), q.tile(i, j), Op::NoTrans);
                    break;
                case KernelKind::TTQRT:
                    ttmqr(store.elimination(it->row, it->piv, it->panel), q.tile(p, j), q.tile(i, j), Op::NoTrans);
                    break;
                default: break;
            }
        }
    }
    return q.to_dense();
}

DenseMatrix extract_r(const TileMatrix& factored) {
    const std::size_t k = std::min(factored.rows(), factored.cols());
    DenseMatrix r(k, factored.cols());
    for (std::size_t c = 0; c < factored.cols(); ++c)
        for (std::size_t row = 0; row <= std::min(c, k - 1); ++row) r(row, c) = factored.at(row, c);
    return r;
}

std::pair<double, double> verify(const DenseMatrix& a0, const DenseMatrix& q, const DenseMatrix& r) {
    const std::size_t m = a0.rows();
    const std::size_t n = a0.cols();
    const std::size_t k = q.cols();
    if (q.rows() != m || k != std::min(m, n) || r.cols() != n || r.rows() < k)
        throw std::invalid_argument("verify: inconsistent shapes");
    DenseMatrix upper(k, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t row = 0; row <= std::min(c, k - 1); ++row) upper(row, c) = r(row, c);

    DenseMatrix gram = multiply(transpose(q), q);
    for (std::size_t d = 0; d < k; ++d) gram(d, d) -= 1.0;
    const double orth = frobenius_norm(gram);

    DenseMatrix diff = multiply(q, upper);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t row = 0; row < m; ++row) diff(row, c) = a0(row, c) - diff(row, c);
    const double norm_a = frobenius_norm(a0);
    const double resid = norm_a == 0.0 ? frobenius_norm(diff) : frobenius_norm(diff) / norm_a;
    return {orth, resid};
}

double orth_threshold(std::size_t n) { return 50.0 * std::ldexp(1.0, -52) * static_cast<double>(n); }
double resid_threshold(std::size_t n) { return 50.0 * std::ldexp(1.0, -52) * std::sqrt(static_cast<double>(n)); }

}  // namespace hqrlab
