#include "hqrlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace hqrlab {
namespace {

struct Householder {
    double beta;
    double tau;
    double scale;  // multiply x by this to get v
};

// LAPACK dlarfg convention: H (alpha; x) = (beta; 0), H = I - tau (1; v)(1; v)ᵀ.
Householder make_householder(double alpha, double xnorm_sq) {
    if (xnorm_sq == 0.0) return {alpha, 0.0, 0.0};
    const double beta = -std::copysign(std::sqrt(alpha * alpha + xnorm_sq), alpha);
    return {beta, (beta - alpha) / beta, 1.0 / (alpha - beta)};
}

void require_kind(const Reflector& h, KernelKind expected, const char* who) {
    if (h.kind != expected)
        throw std::invalid_argument(std::string(who) + ": expected a " + std::string(kernel_name(expected)) +
                                    " reflector, got " + std::string(kernel_name(h.kind)));
}

void require_size(const Reflector& h, std::size_t b, const char* who) {
    if (h.b != b) throw std::invalid_argument(std::string(who) + ": reflector and tile sizes differ");
}

// Rows of the bottom tile that carry reflector j.
std::size_t bottom_rows(KernelKind kind, std::size_t j, std::size_t b) {
    return kind == KernelKind::TTQRT ? j + 1 : b;
}

Reflector stacked_qr(KernelKind kind, TileRef top, TileRef bottom) {
    const std::size_t b = top.size();
    if (bottom.size() != b) throw std::invalid_argument("stacked factorization: tile sizes differ");
    Reflector h{kind, b, std::vector<double>(b * b, 0.0), std::vector<double>(b, 0.0)};
    for (std::size_t j = 0; j < b; ++j) {
        const std::size_t rows = bottom_rows(kind, j, b);
        double xnorm_sq = 0.0;
        for (std::size_t r = 0; r < rows; ++r) xnorm_sq += bottom(r, j) * bottom(r, j);
        const Householder hh = make_householder(top(j, j), xnorm_sq);
        h.tau[j] = hh.tau;
        top(j, j) = hh.beta;
        double* vj = h.v.data() + j * b;
        for (std::size_t r = 0; r < rows; ++r) {
            vj[r] = bottom(r, j) * hh.scale;
            bottom(r, j) = 0.0;
        }
        if (hh.tau == 0.0) continue;
        for (std::size_t c = j + 1; c < b; ++c) {
            double w = top(j, c);
            for (std::size_t r = 0; r < rows; ++r) w += vj[r] * bottom(r, c);
            w *= hh.tau;
            top(j, c) -= w;
            for (std::size_t r = 0; r < rows; ++r) bottom(r, c) -= vj[r] * w;
        }
    }
    // The victim tile is logically zero; clear any triangle remnants.
    for (double& x : bottom.span()) x = 0.0;
    return h;
}

void stacked_apply(const Reflector& h, TileRef top, TileRef bottom, Op op) {
    const std::size_t b = h.b;
    if (top.size() != b || bottom.size() != b) throw std::invalid_argument("stacked update: tile sizes differ");
    auto apply_one = [&](std::size_t j) {
        if (h.tau[j] == 0.0) return;
        const std::size_t rows = bottom_rows(h.kind, j, b);
        const double* vj = h.v.data() + j * b;
        for (std::size_t c = 0; c < b; ++c) {
            double w = top(j, c);
            for (std::size_t r = 0; r < rows; ++r) w += vj[r] * bottom(r, c);
            w *= h.tau[j];
            top(j, c) -= w;
            for (std::size_t r = 0; r < rows; ++r) bottom(r, c) -= vj[r] * w;
        }
    };
    if (op == Op::Trans) {
        for (std::size_t j = 0; j < b; ++j) apply_one(j);
    } else {
        for (std::size_t j = b; j-- > 0;) apply_one(j);
    }
}

}  // namespace

std::string_view kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::GEQRT: return "GEQRT";
        case KernelKind::UNMQR: return "UNMQR";
        case KernelKind::TSQRT: return "TSQRT";
        case KernelKind::TSMQR: return "TSMQR";
        case KernelKind::TTQRT: return "TTQRT";
        case KernelKind::TTMQR: return "TTMQR";
    }
    return "?";
}

Reflector geqrt(TileRef a) {
    const std::size_t b = a.size();
    Reflector h{KernelKind::GEQRT, b, std::vector<double>(b * b, 0.0), std::vector<double>(b, 0.0)};
    for (std::size_t j = 0; j < b; ++j) {
        double xnorm_sq = 0.0;
        for (std::size_t r = j + 1; r < b; ++r) xnorm_sq += a(r, j) * a(r, j);
        const Householder hh = make_householder(a(j, j), xnorm_sq);
        h.tau[j] = hh.tau;
        a(j, j) = hh.beta;
        double* vj = h.v.data() + j * b;
        for (std::size_t r = j + 1; r < b; ++r) {
            vj[r] = a(r, j) * hh.scale;
            a(r, j) = 0.0;
        }
        if (hh.tau == 0.0) continue;
        for (std::size_t c = j + 1; c < b; ++c) {
            double w = a(j, c);
            for (std::size_t r = j + 1; r < b; ++r) w += vj[r] * a(r, c);
            w *= hh.tau;
            a(j, c) -= w;
            for (std::size_t r = j + 1; r < b; ++r) a(r, c) -= vj[r] * w;
        }
    }
    return h;
}

void unmqr(const Reflector& h, TileRef c, Op op) {
    require_kind(h, KernelKind::GEQRT, "unmqr");
    require_size(h, c.size(), "unmqr");
    const std::size_t b = h.b;
    auto apply_one = [&](std::size_t j) {
        if (h.tau[j] == 0.0) return;
        const double* vj = h.v.data() + j * b;
        for (std::size_t col = 0; col < b; ++col) {
            double w = c(j, col);
            for (std::size_t r = j + 1; r < b; ++r) w += vj[r] * c(r, col);
            w *= h.tau[j];
            c(j, col) -= w;
            for (std::size_t r = j + 1; r < b; ++r) c(r, col) -= vj[r] * w;
        }
    };
    if (op == Op::Trans) {
        for (std::size_t j = 0; j < b; ++j) apply_one(j);
    } else {
        for (std::size_t j = b; j-- > 0;) apply_one(j);
    }
}

Reflector tsqrt(TileRef r, TileRef a) { return stacked_qr(KernelKind::TSQRT, r, a); }

void tsmqr(const Reflector& h, TileRef top, TileRef bottom, Op op) {
    require_kind(h, KernelKind::TSQRT, "tsmqr");
    require_size(h, top.size(), "tsmqr");
    stacked_apply(h, top, bottom, op);
}

Reflector ttqrt(TileRef top, TileRef bottom) { return stacked_qr(KernelKind::TTQRT, top, bottom); }

void ttmqr(const Reflector& h, TileRef top, TileRef bottom, Op op) {
    require_kind(h, KernelKind::TTQRT, "ttmqr");
    require_size(h, top.size(), "ttmqr");
    stacked_apply(h, top, bottom, op);
}

}  // namespace hqrlab
