#include "hqrlab/distribution.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

namespace hqrlab {
namespace {

void require_positive(int v, const char* what) {
    if (v < 1) throw std::invalid_argument(std::string("Distribution: ") + what + " must be positive");
}

void check_row(int i, int mt) {
    if (i < 0 || i >= mt)
        throw std::invalid_argument("tile row " + std::to_string(i) + " outside [0, " + std::to_string(mt) + ")");
}

}  // namespace

Distribution Distribution::cyclic2d(int P, int Q) {
    require_positive(P, "P");
    require_positive(Q, "Q");
    return {DistKind::Cyclic2D, P, Q};
}

Distribution Distribution::cyclic1d(int r) {
    require_positive(r, "r");
    return {DistKind::Cyclic1D, r, 1};
}

Distribution Distribution::block1d(int r) {
    require_positive(r, "r");
    return {DistKind::Block1D, r, 1};
}

std::string Distribution::describe() const {
    switch (kind_) {
        case DistKind::Cyclic2D: return "cyclic2d(" + std::to_string(P_) + "," + std::to_string(Q_) + ")";
        case DistKind::Cyclic1D: return "cyclic1d(" + std::to_string(P_) + ")";
        case DistKind::Block1D: return "block1d(" + std::to_string(P_) + ")";
    }
    return "?";
}

Distribution parse_distribution(std::string_view text) {
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')')
        throw std::invalid_argument("bad distribution '" + std::string(text) + "'");
    const std::string_view name = text.substr(0, open);
    std::vector<int> args;
    std::string_view rest = text.substr(open + 1, text.size() - open - 2);
    while (true) {
        const auto comma = rest.find(',');
        const std::string_view field = rest.substr(0, comma);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size())
            throw std::invalid_argument("bad distribution '" + std::string(text) + "'");
        args.push_back(v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (name == "cyclic2d" && args.size() == 2) return Distribution::cyclic2d(args[0], args[1]);
    if (name == "cyclic1d" && args.size() == 1) return Distribution::cyclic1d(args[0]);
    if (name == "block1d" && args.size() == 1) return Distribution::block1d(args[0]);
    throw std::invalid_argument("bad distribution '" + std::string(text) + "'");
}

int block_rows(const Distribution& dist, int mt) { return (mt + dist.P() - 1) / dist.P(); }

int owner(const Distribution& dist, int i, int j, int mt, int nt) {
    check_row(i, mt);
    if (j < 0 || j >= nt)
        throw std::invalid_argument("tile column " + std::to_string(j) + " outside [0, " + std::to_string(nt) + ")");
    switch (dist.kind()) {
        case DistKind::Cyclic2D: return (i % dist.P()) * dist.Q() + (j % dist.Q());
        case DistKind::Cyclic1D: return i % dist.P();
        case DistKind::Block1D: return i / block_rows(dist, mt);
    }
    return 0;
}

LocalRow local_index(const Distribution& dist, int i, int mt) {
    check_row(i, mt);
    if (dist.kind() == DistKind::Block1D) {
        const int h = block_rows(dist, mt);
        return {i / h, i % h};
    }
    return {i % dist.P(), i / dist.P()};
}

}  // namespace hqrlab
