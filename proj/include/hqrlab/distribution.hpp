#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace hqrlab {

enum class DistKind { Cyclic2D, Cyclic1D, Block1D };

/// Tile-to-process placement.
///
/// Cyclic2D(P, Q): owner(i, j) = (i mod P)·Q + (j mod Q).
/// Cyclic1D(r):    owner(i, ·) = i mod r.
/// Block1D(r):     owner(i, ·) = ⌊i / ⌈mt/r⌉⌋, so it needs the tile-row count.
class Distribution {
public:
    static Distribution cyclic2d(int P, int Q);
    static Distribution cyclic1d(int r);
    static Distribution block1d(int r);

    DistKind kind() const { return kind_; }
    int P() const { return P_; }
    int Q() const { return Q_; }
    /// Number of processes the distribution spans.
    int process_count() const { return kind_ == DistKind::Cyclic2D ? P_ * Q_ : P_; }
    /// Number of processes along the row dimension.
    int row_processes() const { return P_; }

    std::string describe() const;

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    Distribution(DistKind kind, int P, int Q) : kind_(kind), P_(P), Q_(Q) {}

    DistKind kind_ = DistKind::Cyclic2D;
    int P_ = 1;
    int Q_ = 1;
};

struct LocalRow {
    int process;
    int local;
    friend bool operator==(const LocalRow&, const LocalRow&) = default;
};

/// Throws std::invalid_argument for coordinates outside [0, mt)×[0, nt).
int owner(const Distribution& dist, int i, int j, int mt, int nt);

/// Row-process and local row index of tile-row i. For Cyclic2D the row
/// process index (i mod P) is returned, not the flattened process id.
LocalRow local_index(const Distribution& dist, int i, int mt);

/// Inverse of Distribution::describe: "cyclic2d(P,Q)", "cyclic1d(r)", "block1d(r)".
/// Throws std::invalid_argument on anything else.
Distribution parse_distribution(std::string_view text);

/// ⌈mt/r⌉, the block height of Block1D.
int block_rows(const Distribution& dist, int mt);

}  // namespace hqrlab
