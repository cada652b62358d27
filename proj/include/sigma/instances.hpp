#pragma once

#include "battery.hpp"

#include <functional>
#include <future>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace sigma {

struct ConvexInstance {
    Protoset base;
    WedgeSpec wedge;
    SubdivisionPlan plan;
    ConvexBuild build;
    std::string beta_tile;

    BatteryParams params() const { return battery_params(build, base, plan, wedge, beta_tile); }
};

inline ConvexInstance make_instance(Protoset base, WedgeSpec w, SubdivisionPlan plan, const std::string& name,
                                    const std::string& beta_tile) {
    ConvexInstance ci{std::move(base), w, std::move(plan), {}, beta_tile};
    ci.build = build_convex(ci.base, ci.wedge, ci.plan, name);
    return ci;
}

inline ConvexInstance convex_fig7_instance() {
    return make_instance(builtin::schmitt_fig4(), builtin::default_wedge(), builtin::fig7_plan(), "convex_fig7", "red");
}

inline ConvexInstance convex_fig8_instance() {
    return make_instance(builtin::sigma3_fig5(), builtin::default_wedge(), builtin::fig8_plan(), "convex_fig8", "R");
}

namespace builtin {
inline Protoset convex_fig7() { return convex_fig7_instance().build.derived; }
inline Protoset convex_fig8() { return convex_fig8_instance().build.derived; }

inline Protoset unit_square() {
    Protoset ps;
    ps.name = "unit_square";
    ps.tiles.push_back(make_tile("square", "#6a8caf", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {"plain", "plain", "plain", "plain"}));
    ps.rows = json::parse(R"({"types": [{"id": "S", "tile": "square", "top": [2], "bottom": [0], "lateral": [1, 3]}]})");
    return ps;
}

inline Protoset domino() {
    Protoset ps;
    ps.name = "domino";
    ps.tiles.push_back(make_tile("domino", "#c9a227", {{0, 0}, {2, 0}, {2, 1}, {0, 1}}, {"plain", "plain", "plain", "plain"}));
    return ps;
}

// two row tiles with the same keyed top and bottom and different side keys
inline Protoset fig3_rows() {
    Protoset ps;
    ps.name = "fig3_rows";
    ps.reflections_allowed = false;
    Polygon sq = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    ps.tiles.push_back(make_tile("A", "#3b6fb6", sq, {"nick:v", "bump:a", "bump:v", "nick:a"}));
    ps.tiles.push_back(make_tile("B", "#e0b63a", sq, {"nick:v", "bump:b", "bump:v", "nick:b"}));
    ps.rows = json::parse(R"({"types": [
        {"id": "A", "tile": "A", "top": [2], "bottom": [0], "lateral": [1, 3]},
        {"id": "B", "tile": "B", "top": [2], "bottom": [0], "lateral": [1, 3]}]})");
    ps.notes = "Rows of A and B stack in any order; the outlines agree, only the side keys differ.";
    return ps;
}

inline std::vector<std::string> names() {
    return {"unit_square", "domino", "schmitt_fig4", "sigma3_fig5", "convex_fig7", "convex_fig8", "fig3_rows"};
}

inline Protoset by_name(const std::string& n) {
    if (n == "unit_square") return unit_square();
    if (n == "domino") return domino();
    if (n == "schmitt_fig4") return schmitt_fig4();
    if (n == "sigma3_fig5") return sigma3_fig5();
    if (n == "convex_fig7") return convex_fig7();
    if (n == "convex_fig8") return convex_fig8();
    if (n == "fig3_rows") return fig3_rows();
    throw std::invalid_argument("unknown builtin " + n);
}
}  // namespace builtin

// vertex count -> number of prototiles
inline std::map<size_t, int> census(const Protoset& ps) {
    std::map<size_t, int> m;
    for (auto& t : ps.tiles) ++m[t.size()];
    return m;
}

// ---------------------------------------------------------------- forcing

struct SiteCorner {
    std::string tile;
    size_t corner = 0;
    ForcedStatus status = ForcedStatus::impossible;
    size_t configurations = 0;
};

struct Site {
    std::string name;
    Point where;
    std::vector<SiteCorner> corners;
    bool unique() const {
        for (auto& c : corners)
            if (c.status != ForcedStatus::unique) return false;
        return !corners.empty();
    }
};

struct ForcingSummary {
    std::vector<Site> sites;
    bool q_triple_distinct = false;
    Scalar qr2, qs2, qt2;
    bool all_unique() const {
        for (auto& s : sites)
            if (!s.unique()) return false;
        return !sites.empty();
    }
    json to_json() const {
        json j;
        json a = json::array();
        for (auto& s : sites) {
            json cs = json::array();
            for (auto& c : s.corners)
                cs.push_back({{"tile", c.tile}, {"corner", c.corner}, {"status", status_name(c.status)},
                              {"configurations", c.configurations}});
            a.push_back({{"site", s.name}, {"unique", s.unique()}, {"corners", cs}});
        }
        j["sites"] = a;
        j["q_edges_distinct"] = q_triple_distinct;
        j["|QR|^2"] = scalar_to_json(qr2);
        j["|QS|^2"] = scalar_to_json(qs2);
        j["|QT|^2"] = scalar_to_json(qt2);
        return j;
    }
};

// every corner of every prototile
inline std::vector<SiteCorner> forcing_by_corner(const Atlas& atlas) {
    std::vector<SiteCorner> out;
    for (auto& t : atlas.table().protoset().tiles)
        for (size_t j = 0; j < t.size(); ++j) {
            auto r = forced_corner(atlas, t.name, j);
            out.push_back({t.name, j, r.status, r.witnesses.size()});
        }
    return out;
}

// sites: interior chord endpoints, nick apexes, and the named construction points
inline ForcingSummary verify_forcing(const ConvexInstance& ci, const Atlas& atlas) {
    ForcingSummary fs;
    const ConvexBuild& cb = ci.build;
    auto site = [&](const std::string& name, const std::string& tn, const Point& pt) {
        Site s{name, pt, {}};
        for (auto& o : cb.occurrences.at(tn)) {
            const Prototile& t = cb.derived.tiles[cb.derived.index_of(o.piece)];
            for (size_t j = 0; j < t.size(); ++j)
                if (o.pose.apply(t.vertex(j)) == pt) {
                    auto r = forced_corner(atlas, t.name, j);
                    s.corners.push_back({t.name, j, r.status, r.witnesses.size()});
                }
        }
        fs.sites.push_back(s);
    };
    for (auto& [letter, ref] : cb.named) site(letter, ref.first, ref.second);
    for (auto& t : ci.base.tiles) {
        const WedgedTile& wt = cb.wedged.at(t.name);
        for (size_t e = 0; e < t.size(); ++e)
            if (t.labels[e].kind == EdgeKind::nick)
                site(t.name + " nick " + std::to_string(e), t.name, wt.tile.boundary[static_cast<size_t>(wt.apex_pos[e])]);
        const TilePlan& tp = ci.plan.tiles.at(t.name);
        for (auto& [k, p] : tp.points)
            if (point_in_polygon(p, wt.tile.boundary) > 0 && !cb.named.count(k)) site(t.name + " " + k, t.name, p);
    }
    auto np = named_points(cb);
    if (np.count("Q") && np.count("R") && np.count("S") && np.count("T")) {
        fs.qr2 = norm2(np["R"] - np["Q"]);
        fs.qs2 = norm2(np["S"] - np["Q"]);
        fs.qt2 = norm2(np["T"] - np["Q"]);
        fs.q_triple_distinct = !(fs.qr2 == fs.qs2) && !(fs.qr2 == fs.qt2) && !(fs.qs2 == fs.qt2);
    }
    return fs;
}

// ---------------------------------------------------------------- parameter search

struct SearchCandidate {
    WedgeSpec wedge;
    Point q, r;
};

struct SearchExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SearchResult {
    size_t index = 0;
    ConvexInstance instance;
    BatteryReport report;
};

// field-representable wedge directions and a grid of interior points, in seeded order
inline std::vector<SearchCandidate> default_candidates(uint64_t seed, size_t limit = 256) {
    std::vector<Turn> dirs = {Turn(5, 2), Turn(3, 1), Turn(7, 3), Turn(4, 1), Turn(2, 1), Turn(8, 3), Turn(12, 5),
                              Turn(Scalar(2), Scalar(0, mpq_class(1, 2)))};
    std::vector<Scalar> params = {Scalar::frac(1, 4), Scalar::frac(1, 3), Scalar::frac(1, 5), Scalar::frac(2, 5)};
    std::vector<SearchCandidate> all;
    for (auto& d : dirs)
        for (auto& p : params)
            for (int qi = -2; qi <= 2; ++qi)
                for (int ri = -2; ri <= 2; ++ri) {
                    Point q{Scalar::frac(29, 40) + Scalar::frac(qi, 80), Scalar::frac(-17, 40) + Scalar::frac(qi * qi, 160)};
                    Point r{Scalar::frac(15, 16) + Scalar::frac(ri, 160), Scalar::frac(-12, 25) + Scalar::frac(ri, 100)};
                    all.push_back({WedgeSpec{d, p}, q, r});
                }
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    if (all.size() > limit) all.resize(limit);
    return all;
}

inline SearchResult search_parameters(const Protoset& base,
                                      const std::function<SubdivisionPlan(const Point&, const Point&)>& tmpl,
                                      const std::vector<SearchCandidate>& cands, const std::string& beta_tile,
                                      unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    auto attempt = [&](size_t i) -> std::optional<SearchResult> {
        try {
            const auto& c = cands[i];
            ConvexInstance ci = make_instance(base, c.wedge, tmpl(c.q, c.r), base.name + "_convex", beta_tile);
            BatteryReport rep = constraint_battery(ci.build.derived, ci.params());
            if (!rep.all_pass()) return std::nullopt;
            return SearchResult{i, std::move(ci), std::move(rep)};
        } catch (const std::exception&) {
            return std::nullopt;  // degenerate wedge, non-convex piece, bad chord
        }
    };
    // batches keep the lowest-index success regardless of completion order
    for (size_t lo = 0; lo < cands.size(); lo += threads) {
        size_t hi = std::min(cands.size(), lo + threads);
        std::vector<std::future<std::optional<SearchResult>>> fut;
        for (size_t i = lo; i < hi; ++i) fut.push_back(std::async(std::launch::async, attempt, i));
        std::optional<SearchResult> best;
        for (auto& f : fut) {
            auto r = f.get();
            if (r && !best) best = std::move(r);
        }
        if (best) return std::move(*best);
    }
    throw SearchExhausted("no candidate passed the battery (" + std::to_string(cands.size()) + " tried)");
}

// ---------------------------------------------------------------- the three-row instance

struct Fig8Report {
    ConvexInstance instance;
    std::map<size_t, int> census;
    bool all_convex = false;
    bool central_symmetry = false;
    BatteryReport battery;
    std::string battery_note;
    std::optional<std::vector<SiteCorner>> forcing;
    std::string forcing_note;
};

inline bool same_vertex_set(Polygon a, Polygon b) {
    if (a.size() != b.size()) return false;
    auto lt = [](const Point& p, const Point& q) { return lex(p, q) < 0; };
    std::sort(a.begin(), a.end(), lt);
    std::sort(b.begin(), b.end(), lt);
    return a == b;
}

// pieces of a tile map onto pieces under the half turn about the tile's vertex centroid
inline bool centrally_symmetric_split(const ConvexBuild& cb, const Prototile& t) {
    Point c{0, 0};
    for (auto& p : t.boundary) c = c + p;
    c = c * Scalar::frac(1, static_cast<long>(t.size()));
    Isometry h = Isometry::rotation_about(c, -1, 0);
    if (!same_vertex_set(transform(h, t.boundary), t.boundary)) return false;
    std::vector<Polygon> placed;
    for (auto& o : cb.occurrences.at(t.name))
        placed.push_back(transform(o.pose, cb.derived.tiles[cb.derived.index_of(o.piece)].boundary));
    for (auto& p : placed) {
        Polygon img = transform(h, p);
        bool hit = false;
        for (auto& q : placed)
            if (same_vertex_set(img, q) && congruent(p, q, false)) hit = true;
        if (!hit) return false;
    }
    return true;
}

inline Fig8Report build_fig8_instance(long atlas_budget = 2'000'000) {
    Fig8Report r;
    r.instance = convex_fig8_instance();
    const Protoset& d = r.instance.build.derived;
    r.census = census(d);
    r.all_convex = true;
    for (auto& t : d.tiles)
        if (!convexity(t.boundary)) r.all_convex = false;
    r.central_symmetry = centrally_symmetric_split(r.instance.build, r.instance.base.tiles[r.instance.base.index_of("R")]);
    try {
        BatteryParams bp = r.instance.params();
        bp.budget = atlas_budget;
        r.battery = constraint_battery(d, bp);
    } catch (const BudgetExceeded& e) {
        r.battery_note = e.what();
    }
    try {
        Atlas at(d, AtlasOptions{atlas_budget, true});
        r.forcing = forcing_by_corner(at);
    } catch (const BudgetExceeded& e) {
        r.forcing_note = e.what();
    }
    return r;
}

}  // namespace sigma
