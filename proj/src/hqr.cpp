#include "hqrlab/hqr.hpp"

#include <algorithm>
#include "json.hpp"
#include <stdexcept>

namespace hqrlab {
namespace {

// Local geometry of one cluster for one panel.
struct ClusterView {
    int cluster;
    int p;
    int rows;  // local row count
    int top;   // first local row on or below the global diagonal
    int diag;  // local diagonal index (= panel)

    int global(int l) const { return l * p + cluster; }
    bool active() const { return top < rows; }
};

ClusterView view_of(const HqrConfig& cfg, int c, int k) {
    const int rows = (cfg.mt - c + cfg.p - 1) / cfg.p;
    const int top = k > c ? (k - c + cfg.p - 1) / cfg.p : 0;
    return {c, cfg.p, rows, top, k};
}

// Head of the domain holding local row l (l below the local diagonal): the
// domain containing the diagonal is headed by the diagonal itself.
int domain_head(int l, int diag, int a) {
    const int start = (l / a) * a;
    return start <= diag ? diag : start;
}

class HqrBuilder {
public:
    explicit HqrBuilder(const HqrConfig& cfg) : cfg_(cfg), clock_(cfg.mt), list_{cfg.mt, cfg.nt, {}} {}

    EliminationList build() {
        for (int k = 0; k < std::min(cfg_.mt, cfg_.nt); ++k) panel(k);
        return unit_schedule(std::move(list_));
    }

private:
    void emit(int row, int piv, int k, KernelFamily family) {
        list_.elims.push_back({row, piv, k, clock_.fire(row, piv), family});
    }

    void reduce(TreeKind kind, const std::vector<int>& rows, int k) {
        if (rows.size() < 2) return;
        for (const Kill& kill : reduce_rows(kind, rows, clock_)) emit(kill.victim, kill.killer, k, KernelFamily::TT);
    }

    void panel(int k) {
        std::vector<ClusterView> clusters;
        for (int c = 0; c < cfg_.p; ++c)
            if (auto v = view_of(cfg_, c, k); v.active()) clusters.push_back(v);

        for (const ClusterView& v : clusters) {
            for (int start = 0; start < v.rows; start += cfg_.a) {
                const int end = std::min(start + cfg_.a, v.rows);
                if (end - 1 <= v.diag) continue;
                const int head = start <= v.diag ? v.diag : start;
                for (int l = head + 1; l < end; ++l) emit(v.global(l), v.global(head), k, KernelFamily::TS);
            }
        }

        for (const ClusterView& v : clusters) {
            std::vector<int> rows;
            if (cfg_.domino) {
                if (v.diag >= v.rows) continue;
                rows.push_back(v.global(v.diag));
            } else {
                for (int l = v.top; l <= std::min(v.diag, v.rows - 1); ++l) rows.push_back(v.global(l));
            }
            const int first_below = (v.diag / cfg_.a + 1) * cfg_.a;
            for (int s = first_below; s < v.rows; s += cfg_.a) rows.push_back(v.global(s));
            reduce(cfg_.low_tree, rows, k);
        }

        if (cfg_.domino) {
            for (const ClusterView& v : clusters)
                for (int l = v.top + 1; l <= std::min(v.diag, v.rows - 1); ++l)
                    emit(v.global(l), v.global(v.top), k, KernelFamily::TT);
        }

        std::vector<int> tops;
        for (const ClusterView& v : clusters) tops.push_back(v.global(v.top));
        std::ranges::sort(tops);
        reduce(cfg_.high_tree, tops, k);
    }

    const HqrConfig& cfg_;
    UnitClock clock_;
    EliminationList list_;
};

TreeKind tree_from_json(const nlohmann::json& j, const char* field) {
    const auto name = j.at(field).get<std::string>();
    if (auto kind = parse_tree(name)) return *kind;
    throw std::invalid_argument(std::string("unknown tree kind for \"") + field + "\": " + name);
}

Distribution dist_from_json(const nlohmann::json& j, int p, int q) {
    if (!j.contains("dist")) return Distribution::cyclic2d(p, q);
    const auto& d = j.at("dist");
    const auto kind = d.at("kind").get<std::string>();
    if (kind == "cyclic2d") return Distribution::cyclic2d(d.value("P", p), d.value("Q", q));
    if (kind == "cyclic1d") return Distribution::cyclic1d(d.at("r").get<int>());
    if (kind == "block1d") return Distribution::block1d(d.at("r").get<int>());
    throw std::invalid_argument("unknown distribution kind: " + kind);
}

}  // namespace

void validate_config(const HqrConfig& cfg) {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid HQR config: ") + what);
    };
    need(cfg.mt >= 1, "mt must be >= 1");
    need(cfg.nt >= 1, "nt must be >= 1");
    need(cfg.p >= 1, "p must be >= 1");
    need(cfg.q >= 1, "q must be >= 1");
    need(cfg.a >= 1, "a must be >= 1");
}

std::string_view level_name(TileLevel level) {
    switch (level) {
        case TileLevel::TS0: return "TS0";
        case TileLevel::LOW1: return "LOW1";
        case TileLevel::DOMINO2: return "DOMINO2";
        case TileLevel::HIGH3: return "HIGH3";
        case TileLevel::ROOT: return "ROOT";
    }
    return "?";
}

TileLevel tile_level(const HqrConfig& cfg, int i, int k) {
    validate_config(cfg);
    if (k < 0 || k >= std::min(cfg.mt, cfg.nt) || i >= cfg.mt)
        throw std::invalid_argument("tile_level: tile outside the factored region");
    if (i < k) throw std::invalid_argument("tile_level: tile lies above the diagonal");
    if (i == k) return TileLevel::ROOT;
    const ClusterView v = view_of(cfg, i % cfg.p, k);
    const int l = i / cfg.p;
    if (l == v.top) return TileLevel::HIGH3;
    if (l <= v.diag) return TileLevel::DOMINO2;
    return domain_head(l, v.diag, cfg.a) == l ? TileLevel::LOW1 : TileLevel::TS0;
}

EliminationList gen_hqr(const HqrConfig& cfg) {
    validate_config(cfg);
    return HqrBuilder(cfg).build();
}

HqrConfig preset_slhd10(int mt, int nt, int r) {
    if (r < 1 || mt < 1 || mt % r != 0)
        throw std::invalid_argument("preset_slhd10: process count must divide mt");
    HqrConfig cfg;
    cfg.mt = mt;
    cfg.nt = nt;
    cfg.a = mt / r;
    cfg.low_tree = TreeKind::BinaryTree;
    cfg.high_tree = TreeKind::BinaryTree;
    cfg.dist = Distribution::block1d(r);
    validate_config(cfg);
    return cfg;
}

HqrConfig preset_bbd10(int mt, int nt, Distribution dist) {
    HqrConfig cfg;
    cfg.mt = mt;
    cfg.nt = nt;
    cfg.a = std::max(mt, 1);
    cfg.dist = dist;
    validate_config(cfg);
    return cfg;
}

HqrConfig config_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        HqrConfig cfg;
        cfg.mt = j.at("mt").get<int>();
        cfg.nt = j.at("nt").get<int>();
        cfg.p = j.value("p", 1);
        cfg.q = j.value("q", 1);
        cfg.a = j.value("a", 1);
        if (j.contains("low")) cfg.low_tree = tree_from_json(j, "low");
        if (j.contains("high")) cfg.high_tree = tree_from_json(j, "high");
        cfg.domino = j.value("domino", false);
        cfg.dist = dist_from_json(j, cfg.p, cfg.q);
        validate_config(cfg);
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed HQR config: ") + e.what());
    }
}

std::string config_to_json(const HqrConfig& cfg) {
    nlohmann::json dist;
    switch (cfg.dist.kind()) {
        case DistKind::Cyclic2D: dist = {{"kind", "cyclic2d"}, {"P", cfg.dist.P()}, {"Q", cfg.dist.Q()}}; break;
        case DistKind::Cyclic1D: dist = {{"kind", "cyclic1d"}, {"r", cfg.dist.P()}}; break;
        case DistKind::Block1D: dist = {{"kind", "block1d"}, {"r", cfg.dist.P()}}; break;
    }
    const nlohmann::json j = {{"mt", cfg.mt},
                              {"nt", cfg.nt},
                              {"p", cfg.p},
                              {"q", cfg.q},
                              {"a", cfg.a},
                              {"low", tree_name(cfg.low_tree)},
                              {"high", tree_name(cfg.high_tree)},
                              {"domino", cfg.domino},
                              {"dist", dist}};
    return j.dump();
}

}  // namespace hqrlab
