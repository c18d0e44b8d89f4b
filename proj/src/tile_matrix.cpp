#include "hqrlab/tile_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hqrlab {

DenseMatrix DenseMatrix::identity(std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    for (std::size_t d = 0; d < std::min(rows, cols); ++d) m(d, d) = 1.0;
    return m;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double blj = b(l, j);
            if (blj == 0.0) continue;
            for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, l) * blj;
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

double frobenius_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (double v : a.values()) sum += v * v;
    return std::sqrt(sum);
}

TileMatrix::TileMatrix(std::size_t mt, std::size_t nt, std::size_t b) : mt_(mt), nt_(nt), b_(b) {
    if (mt == 0 || nt == 0 || b == 0)
        throw std::invalid_argument("TileMatrix: mt, nt and b must be positive");
    data_.assign(mt * nt * b * b, 0.0);
}

TileRef TileMatrix::tile(std::size_t i, std::size_t j) {
    if (i >= mt_ || j >= nt_) throw std::out_of_range("TileMatrix::tile: index out of range");
    return {data_.data() + offset(i, j), b_};
}

ConstTileRef TileMatrix::tile(std::size_t i, std::size_t j) const {
    if (i >= mt_ || j >= nt_) throw std::out_of_range("TileMatrix::tile: index out of range");
    return {data_.data() + offset(i, j), b_};
}

double& TileMatrix::at(std::size_t r, std::size_t c) {
    return data_[offset(r / b_, c / b_) + (c % b_) * b_ + r % b_];
}

double TileMatrix::at(std::size_t r, std::size_t c) const {
    return data_[offset(r / b_, c / b_) + (c % b_) * b_ + r % b_];
}

DenseMatrix TileMatrix::to_dense() const {
    DenseMatrix d(rows(), cols());
    for (std::size_t c = 0; c < cols(); ++c)
        for (std::size_t r = 0; r < rows(); ++r) d(r, c) = at(r, c);
    return d;
}

TileMatrix TileMatrix::from_dense(const DenseMatrix& dense, std::size_t mt, std::size_t nt, std::size_t b) {
    TileMatrix t(mt, nt, b);
    if (dense.rows() != t.rows() || dense.cols() != t.cols())
        throw std::invalid_argument("from_dense: expected " + std::to_string(t.rows()) + "x" +
                                    std::to_string(t.cols()) + ", got " + std::to_string(dense.rows()) +
                                    "x" + std::to_string(dense.cols()));
    for (std::size_t c = 0; c < t.cols(); ++c)
        for (std::size_t r = 0; r < t.rows(); ++r) t.at(r, c) = dense(r, c);
    return t;
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_symmetric() {
    const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
}

TileMatrix make_random(std::size_t mt, std::size_t nt, std::size_t b, std::uint64_t seed) {
    TileMatrix a(mt, nt, b);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < mt; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            for (double& v : a.tile(i, j).span()) v = rng.next_symmetric();
    return a;
}

TileMatrix make_identity(std::size_t mt, std::size_t nt, std::size_t b) {
    TileMatrix a(mt, nt, b);
    for (std::size_t d = 0; d < std::min(a.rows(), a.cols()); ++d) a.at(d, d) = 1.0;
    return a;
}

}  // namespace hqrlab
