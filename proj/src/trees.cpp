#include "hqrlab/trees.hpp"

#include <algorithm>
#include <stdexcept>

namespace hqrlab {
namespace {

std::vector<Kill> flat_shape(int n) {
    std::vector<Kill> out;
    for (int v = 1; v < n; ++v) out.push_back({v, 0});
    return out;
}

// Distance doubling anchored at position 0: at level s, position v with
// v mod 2^(s+1) == 2^s is killed by v - 2^s.
std::vector<Kill> binary_shape(int n) {
    std::vector<Kill> out;
    for (int d = 1; d < n; d *= 2)
        for (int v = d; v < n; v += 2 * d) out.push_back({v, v - d});
    return out;
}

// Below the survivor, positions are cut into segments of Fibonacci sizes
// 1, 1, 2, 3, 5, ... from the top; the last segment may be truncated. Segment
// j is killed by the positions immediately above it, and segments fire from
// the bottom up.
std::vector<Kill> fibonacci_shape(int n) {
    struct Segment {
        int start;
        int size;
    };
    std::vector<Segment> segments;
    int start = 1;
    for (int f0 = 1, f1 = 1; start < n;) {
        const int size = std::min(f0, n - start);
        segments.push_back({start, size});
        start += size;
        f0 = std::exchange(f1, f0 + f1);
    }
    std::vector<Kill> out;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it)
        for (int r = 0; r < it->size; ++r) out.push_back({it->start + r, it->start - it->size + r});
    return out;
}

// Time-stepped greedy over one reduction: at each step the ready rows R
// (alive, available before the step) lose their bottom ⌊|R|/2⌋ members, each
// killed by the row |R|/2 positions above it.
std::vector<Kill> greedy_rows(std::span<const int> rows, const UnitClock& clock) {
    const std::size_t n = rows.size();
    std::vector<bool> alive(n, true);
    std::vector<int> avail(n);
    for (std::size_t p = 0; p < n; ++p) avail[p] = clock.last(rows[p]);
    std::vector<Kill> out;
    std::size_t remaining = n;
    for (int t = 1; remaining > 1; ++t) {
        std::vector<std::size_t> ready;
        for (std::size_t p = 0; p < n; ++p)
            if (alive[p] && avail[p] < t) ready.push_back(p);
        const std::size_t z = ready.size() / 2;
        const std::size_t r = ready.size();
        for (std::size_t q = 0; q < z; ++q) {
            const std::size_t victim = ready[r - z + q];
            const std::size_t killer = ready[r - 2 * z + q];
            out.push_back({rows[victim], rows[killer]});
            alive[victim] = false;
            avail[killer] = t;
            --remaining;
        }
    }
    return out;
}

// Column-stepped greedy over the whole matrix: at each step, panels left to
// right, rows whose previous-panel tiles were zeroed at an earlier step form
// the ready set of that panel.
EliminationList greedy_matrix(int mt, int nt) {
    const int panels = std::min(mt, nt);
    constexpr int never = -1;
    std::vector<std::vector<int>> zeroed(static_cast<std::size_t>(panels),
                                         std::vector<int>(static_cast<std::size_t>(mt), never));
    struct Timed {
        Elimination e;
        int order;
    };
    std::vector<Timed> fired;
    long long remaining = subdiagonal_tiles(mt, nt);
    for (int t = 1; remaining > 0; ++t) {
        for (int k = 0; k < panels; ++k) {
            std::vector<int> ready;
            for (int i = k; i < mt; ++i) {
                if (zeroed[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] != never) continue;
                const bool prior_done =
                    k == 0 || (zeroed[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)] != never &&
                               zeroed[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)] < t);
                if (prior_done) ready.push_back(i);
            }
            const std::size_t z = ready.size() / 2;
            const std::size_t r = ready.size();
            for (std::size_t q = 0; q < z; ++q) {
                const int victim = ready[r - z + q];
                const int killer = ready[r - 2 * z + q];
                fired.push_back({{victim, killer, k, t, KernelFamily::TT}, static_cast<int>(fired.size())});
                zeroed[static_cast<std::size_t>(k)][static_cast<std::size_t>(victim)] = t;
                --remaining;
            }
        }
    }
    std::ranges::stable_sort(fired, {}, [](const Timed& x) { return x.e.panel; });
    EliminationList list{mt, nt, {}};
    for (const Timed& x : fired) list.elims.push_back(x.e);
    return list;
}

}  // namespace

std::string_view tree_name(TreeKind kind) {
    switch (kind) {
        case TreeKind::FlatTree: return "flat";
        case TreeKind::BinaryTree: return "binary";
        case TreeKind::Greedy: return "greedy";
        case TreeKind::Fibonacci: return "fibonacci";
    }
    return "?";
}

std::optional<TreeKind> parse_tree(std::string_view name) {
    for (TreeKind k : {TreeKind::FlatTree, TreeKind::BinaryTree, TreeKind::Greedy, TreeKind::Fibonacci})
        if (tree_name(k) == name) return k;
    return std::nullopt;
}

std::vector<Kill> static_reduction(TreeKind kind, int n) {
    switch (kind) {
        case TreeKind::FlatTree: return flat_shape(n);
        case TreeKind::BinaryTree: return binary_shape(n);
        case TreeKind::Fibonacci: return fibonacci_shape(n);
        case TreeKind::Greedy: break;
    }
    throw std::invalid_argument("static_reduction: greedy reductions depend on row availability");
}

std::vector<Kill> reduce_rows(TreeKind kind, std::span<const int> rows, const UnitClock& clock) {
    if (kind == TreeKind::Greedy) return greedy_rows(rows, clock);
    std::vector<Kill> out;
    for (const Kill& kp : static_reduction(kind, static_cast<int>(rows.size())))
        out.push_back({rows[static_cast<std::size_t>(kp.victim)], rows[static_cast<std::size_t>(kp.killer)]});
    return out;
}

EliminationList gen_tree(TreeKind kind, int mt, int nt) {
    if (mt < 1 || nt < 1) throw std::invalid_argument("gen_tree: mt and nt must be positive");
    if (kind == TreeKind::Greedy) return unit_schedule(greedy_matrix(mt, nt));

    const KernelFamily family = kind == TreeKind::FlatTree ? KernelFamily::TS : KernelFamily::TT;
    EliminationList list{mt, nt, {}};
    const UnitClock unused(mt);
    for (int k = 0; k < std::min(mt, nt); ++k) {
        std::vector<int> rows;
        for (int i = k; i < mt; ++i) rows.push_back(i);
        for (const Kill& kp : reduce_rows(kind, rows, unused)) list.elims.push_back({kp.victim, kp.killer, k, 0, family});
    }
    return unit_schedule(std::move(list));
}

}  // namespace hqrlab
