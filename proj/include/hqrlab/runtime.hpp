#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hqrlab/elimination.hpp"
#include "hqrlab/reflector_store.hpp"
#include "hqrlab/task_dag.hpp"
#include "hqrlab/tile_matrix.hpp"

namespace hqrlab {

struct TraceEntry {
    int task;
    int worker;
    std::int64_t start_ns;
    std::int64_t end_ns;
};

struct ExecutionReport {
    double elapsed_seconds = 0.0;
    std::array<std::size_t, 6> kernel_counts{};  // indexed by KernelKind
    double orth_err = -1.0;                      // filled in by verify; negative until then
    double resid = -1.0;
    std::vector<TraceEntry> trace;               // in completion order

    std::size_t task_count() const;
};

struct Factorization {
    ReflectorStore store;
    ExecutionReport report;
};

/// Runs every task of `dag` on `workers` threads, overwriting `a` with R.
/// Throws std::invalid_argument on a shape mismatch or workers < 1; an
/// exception thrown by a kernel is rethrown after the pool has stopped.
Factorization execute(TileMatrix& a, const TaskDag& dag, int workers);

/// `task,kind,i,piv,k,j,worker,start_ns,end_ns` CSV.
std::string trace_csv(const TaskDag& dag, const ExecutionReport& report);

/// Explicit M×min(M, N) Q: [I; 0] with every factor transformation applied
/// in reverse canonical order. Throws CorruptedStore on a missing reflector.
DenseMatrix build_q(const ReflectorStore& store, const EliminationList& list, std::size_t b);

/// R as the dense min(M, N)×N upper-trapezoidal part of the factored matrix.
DenseMatrix extract_r(const TileMatrix& factored);

/// (‖QᵀQ − I‖_F, ‖A₀ − QR‖_F / ‖A₀‖_F). R may be the factored tile matrix
/// converted to dense (M×N, only the upper trapezoid is read) or already
/// trimmed to min(M, N) rows. Throws std::invalid_argument on inconsistent shapes.
std::pair<double, double> verify(const DenseMatrix& a0, const DenseMatrix& q, const DenseMatrix& r);

/// Acceptance thresholds 50·ε·N and 50·ε·√N, ε = 2⁻⁵², N = number of columns.
double orth_threshold(std::size_t n);
double resid_threshold(std::size_t n);

}  // namespace hqrlab
