#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqrlab {

/// Kernel family an elimination is carried out with.
enum class KernelFamily { Unset, TS, TT };

/// elim(row, piv, panel): tile (row, panel) is annihilated by tile (piv, panel).
struct Elimination {
    int row = 0;
    int piv = 0;
    int panel = 0;
    int step = 0;  // unit-time step, 0 until scheduled
    KernelFamily family = KernelFamily::Unset;

    friend bool operator==(const Elimination&, const Elimination&) = default;
};

struct EliminationList {
    int mt = 0;
    int nt = 0;
    std::vector<Elimination> elims;

    int panels() const { return mt < nt ? mt : nt; }
    friend bool operator==(const EliminationList&, const EliminationList&) = default;
};

struct Violation {
    enum class Kind { BadIndex, Duplicate, Coverage, Readiness, Annihilator };
    Kind kind;
    std::size_t index;  // list position; for Coverage, the number of entries
    std::string message;
};

std::string_view violation_name(Violation::Kind kind);

/// All rule violations of `list`, in list order; empty when the list is valid.
std::vector<Violation> validate_list(const EliminationList& list);

class InvalidEliminationList : public std::invalid_argument {
public:
    explicit InvalidEliminationList(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Tracks, per tile row, the last unit step the row took part in.
class UnitClock {
public:
    explicit UnitClock(int mt) : last_(static_cast<std::size_t>(mt), 0) {}
    int last(int row) const { return last_[static_cast<std::size_t>(row)]; }
    /// Step at which elim(row, piv, ·) fires next; records it for both rows.
    int fire(int row, int piv);

private:
    std::vector<int> last_;
};

/// Earliest unit-time steps that keep every row's list order: an elimination
/// fires one step after the latest earlier-listed elimination sharing a row.
/// Throws InvalidEliminationList when validation fails.
EliminationList unit_schedule(EliminationList list);

/// Largest step of a scheduled list (0 when empty).
int critical_path_unit(const EliminationList& list);

/// `row,panel,killer,step` CSV with a header, lines sorted by (row, panel).
std::string table_csv(const EliminationList& list);

/// Subdiagonal tile count: the length of every valid list.
long long subdiagonal_tiles(int mt, int nt);

}  // namespace hqrlab
