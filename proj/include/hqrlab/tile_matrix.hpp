#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hqrlab {

/// Mutable view of one b×b column-major tile.
class TileRef {
public:
    TileRef(double* data, std::size_t b) : data_(data), b_(b) {}

    double& operator()(std::size_t r, std::size_t c) const { return data_[c * b_ + r]; }
    std::size_t size() const { return b_; }
    double* data() const { return data_; }
    std::span<double> span() const { return {data_, b_ * b_}; }

private:
    double* data_;
    std::size_t b_;
};

class ConstTileRef {
public:
    ConstTileRef(const double* data, std::size_t b) : data_(data), b_(b) {}
    ConstTileRef(TileRef t) : data_(t.data()), b_(t.size()) {}

    double operator()(std::size_t r, std::size_t c) const { return data_[c * b_ + r]; }
    std::size_t size() const { return b_; }
    const double* data() const { return data_; }
    std::span<const double> span() const { return {data_, b_ * b_}; }

private:
    const double* data_;
    std::size_t b_;
};

/// Column-major dense matrix, used for I/O and verification.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static DenseMatrix identity(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
    std::span<const double> values() const { return data_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);

/// An mt×nt grid of b×b tiles; each tile is stored contiguously (tile-major).
class TileMatrix {
public:
    TileMatrix() = default;
    /// Zero-initialised; throws std::invalid_argument on a zero dimension.
    TileMatrix(std::size_t mt, std::size_t nt, std::size_t b);

    std::size_t mt() const { return mt_; }
    std::size_t nt() const { return nt_; }
    std::size_t b() const { return b_; }
    std::size_t rows() const { return mt_ * b_; }
    std::size_t cols() const { return nt_ * b_; }

    TileRef tile(std::size_t i, std::size_t j);
    ConstTileRef tile(std::size_t i, std::size_t j) const;

    /// Scalar access in global coordinates.
    double& at(std::size_t r, std::size_t c);
    double at(std::size_t r, std::size_t c) const;

    std::span<const double> storage() const { return data_; }

    DenseMatrix to_dense() const;
    /// Throws std::invalid_argument when the dense shape is not (mt·b)×(nt·b).
    static TileMatrix from_dense(const DenseMatrix& dense, std::size_t mt, std::size_t nt, std::size_t b);

    friend bool operator==(const TileMatrix&, const TileMatrix&) = default;

private:
    std::size_t offset(std::size_t i, std::size_t j) const { return (i * nt_ + j) * b_ * b_; }

    std::size_t mt_ = 0;
    std::size_t nt_ = 0;
    std::size_t b_ = 0;
    std::vector<double> data_;
};

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15, then
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [-1, 1): top 53 bits scaled to [0, 1), then mapped by 2u - 1.
    double next_symmetric();

private:
    std::uint64_t state_;
};

/// Entries are drawn in row-major tile order, column-major within each tile
/// (the same order as the TQRM file payload).
TileMatrix make_random(std::size_t mt, std::size_t nt, std::size_t b, std::uint64_t seed);

/// Tiled identity-like matrix: ones on the global diagonal.
TileMatrix make_identity(std::size_t mt, std::size_t nt, std::size_t b);

}  // namespace hqrlab
