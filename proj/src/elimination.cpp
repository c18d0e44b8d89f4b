#include "hqrlab/elimination.hpp"

#include <algorithm>
#include <sstream>

namespace hqrlab {
namespace {

std::string elim_text(const Elimination& e) {
    return "elim(" + std::to_string(e.row) + "," + std::to_string(e.piv) + "," + std::to_string(e.panel) + ")";
}

std::string summarize(const std::vector<Violation>& violations) {
    std::string s = "invalid elimination list (" + std::to_string(violations.size()) + " violations)";
    if (!violations.empty()) s += ": " + violations.front().message;
    return s;
}

}  // namespace

std::string_view violation_name(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::BadIndex: return "bad-index";
        case Violation::Kind::Duplicate: return "duplicate";
        case Violation::Kind::Coverage: return "coverage";
        case Violation::Kind::Readiness: return "readiness";
        case Violation::Kind::Annihilator: return "annihilator";
    }
    return "?";
}

long long subdiagonal_tiles(int mt, int nt) {
    long long n = 0;
    for (int k = 0; k < std::min(mt, nt); ++k) n += mt - 1 - k;
    return n;
}

std::vector<Violation> validate_list(const EliminationList& list) {
    std::vector<Violation> out;
    const int mt = list.mt;
    const int panels = list.panels();
    if (mt < 1 || list.nt < 1) {
        out.push_back({Violation::Kind::BadIndex, 0, "matrix dimensions must be positive"});
        return out;
    }

    // pos[k][i]: list position of the elimination of tile (i, k), or npos.
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> pos(static_cast<std::size_t>(panels),
                                              std::vector<std::size_t>(static_cast<std::size_t>(mt), npos));
    std::vector<bool> usable(list.elims.size(), false);
    for (std::size_t p = 0; p < list.elims.size(); ++p) {
        const Elimination& e = list.elims[p];
        if (e.panel < 0 || e.panel >= panels || e.row <= e.panel || e.row >= mt || e.piv < e.panel ||
            e.piv >= mt || e.piv == e.row) {
            out.push_back({Violation::Kind::BadIndex, p, elim_text(e) + " has an out-of-range row, killer or panel"});
            continue;
        }
        auto& slot = pos[static_cast<std::size_t>(e.panel)][static_cast<std::size_t>(e.row)];
        if (slot != npos) {
            out.push_back({Violation::Kind::Duplicate, p,
                           "tile (" + std::to_string(e.row) + "," + std::to_string(e.panel) + ") eliminated twice"});
            continue;
        }
        slot = p;
        usable[p] = true;
    }

    for (int k = 0; k < panels; ++k)
        for (int i = k + 1; i < mt; ++i)
            if (pos[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] == npos)
                out.push_back({Violation::Kind::Coverage, list.elims.size(),
                               "tile (" + std::to_string(i) + "," + std::to_string(k) + ") never eliminated"});

    for (std::size_t p = 0; p < list.elims.size(); ++p) {
        if (!usable[p]) continue;
        const Elimination& e = list.elims[p];
        for (int kp = 0; kp < e.panel; ++kp) {
            for (int r : {e.row, e.piv}) {
                const std::size_t q = pos[static_cast<std::size_t>(kp)][static_cast<std::size_t>(r)];
                if (q != npos && q > p)
                    out.push_back({Violation::Kind::Readiness, p,
                                   elim_text(e) + " listed before row " + std::to_string(r) + " is zeroed in panel " +
                                       std::to_string(kp)});
            }
        }
        if (e.piv != e.panel) {
            const std::size_t q = pos[static_cast<std::size_t>(e.panel)][static_cast<std::size_t>(e.piv)];
            if (q != npos && q < p)
                out.push_back({Violation::Kind::Annihilator, p,
                               elim_text(e) + " uses row " + std::to_string(e.piv) + " as killer after it was zeroed"});
        }
    }
    return out;
}

InvalidEliminationList::InvalidEliminationList(std::vector<Violation> violations)
    : std::invalid_argument(summarize(violations)), violations_(std::move(violations)) {}

int UnitClock::fire(int row, int piv) {
    auto& a = last_[static_cast<std::size_t>(row)];
    auto& b = last_[static_cast<std::size_t>(piv)];
    const int step = 1 + std::max(a, b);
    a = b = step;
    return step;
}

EliminationList unit_schedule(EliminationList list) {
    if (auto violations = validate_list(list); !violations.empty())
        throw InvalidEliminationList(std::move(violations));
    UnitClock clock(list.mt);
    for (Elimination& e : list.elims) e.step = clock.fire(e.row, e.piv);
    return list;
}

int critical_path_unit(const EliminationList& list) {
    int cp = 0;
    for (const Elimination& e : list.elims) cp = std::max(cp, e.step);
    return cp;
}

std::string table_csv(const EliminationList& list) {
    std::vector<Elimination> sorted = list.elims;
    std::ranges::sort(sorted, {}, [](const Elimination& e) { return std::pair(e.row, e.panel); });
    std::ostringstream os;
    os << "row,panel,killer,step\n";
    for (const Elimination& e : sorted) os << e.row << ',' << e.panel << ',' << e.piv << ',' << e.step << '\n';
    return os.str();
}

}  // namespace hqrlab
