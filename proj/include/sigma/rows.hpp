#pragma once

#include "patch.hpp"
#include "rowgraph.hpp"

#include <map>
#include <string>
#include <vector>

namespace sigma {

struct RowDecl {
    std::string id;
    std::string tile;
    bool half_turn = false;
    std::vector<size_t> top, bottom, lateral;
};

struct SignatureItem {
    Scalar len2;
    EdgeLabel label;
    Turn turn;  // turn from this edge into the next one of the periodic chain
};

struct RowType {
    RowDecl decl;
    Isometry pose;
    Scalar period;  // the row repeats by (period, 0)
    std::vector<Segment> top_chain, bottom_chain;  // top runs right to left, bottom left to right
    std::vector<SignatureItem> top_signature, bottom_signature;
    bool top_featureless = false, bottom_featureless = false;
    std::vector<std::pair<size_t, RowForcing>> lateral_checks;
};

struct RowEdgeInfo {
    size_t from = 0, to = 0;
    bool continuum = false;
    Vec offset;  // position of the upper row's tile relative to the lower one
};

struct RowGraph {
    std::vector<RowType> rows;
    std::vector<RowEdgeInfo> edges;
    Digraph graph;
};

struct RowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<RowDecl> row_decls_from_json(const json& j) {
    const json& list = j.is_object() ? j.at("types") : j;
    if (!list.is_array()) throw ParseError("rows: expected a list of row types");
    std::vector<RowDecl> out;
    for (size_t i = 0; i < list.size(); ++i) {
        const json& r = list[i];
        std::string w = "rows[" + std::to_string(i) + "]";
        RowDecl d;
        try {
            d.id = r.at("id").get<std::string>();
            d.tile = r.at("tile").get<std::string>();
            std::string pose = r.value("pose", "identity");
            if (pose != "identity" && pose != "half_turn") throw ParseError(w + ".pose: expected identity or half_turn");
            d.half_turn = pose == "half_turn";
            d.top = r.at("top").get<std::vector<size_t>>();
            d.bottom = r.at("bottom").get<std::vector<size_t>>();
            d.lateral = r.value("lateral", std::vector<size_t>{});
        } catch (const json::exception& e) {
            throw ParseError(w + ": " + e.what());
        }
        out.push_back(d);
    }
    return out;
}

inline std::map<std::string, std::string> row_involution_from_json(const json& j) {
    std::map<std::string, std::string> m;
    if (j.is_object() && j.contains("involution"))
        for (auto& [k, v] : j["involution"].items()) m[k] = v.get<std::string>();
    return m;
}

inline json row_decls_to_json(const std::vector<RowDecl>& rows, const std::map<std::string, std::string>& inv) {
    json t = json::array();
    for (auto& d : rows)
        t.push_back({{"id", d.id}, {"tile", d.tile}, {"pose", d.half_turn ? "half_turn" : "identity"}, {"top", d.top},
                     {"bottom", d.bottom}, {"lateral", d.lateral}});
    json j = {{"types", t}};
    if (!inv.empty()) j["involution"] = inv;
    return j;
}

namespace detail {

inline std::vector<SignatureItem> signature(const Prototile& t, const std::vector<Segment>& chain, const std::vector<size_t>& idx) {
    std::vector<SignatureItem> s;
    for (size_t i = 0; i < chain.size(); ++i) {
        const Segment& a = chain[i];
        const Segment& b = chain[(i + 1) % chain.size()];
        s.push_back({norm2(a.b - a.a), t.labels[idx[i]], Turn::between(a.b - a.a, b.b - b.a)});
    }
    return s;
}

inline bool featureless(const std::vector<SignatureItem>& sig) {
    for (auto& x : sig)
        if (!x.label.is_plain() || !x.turn.is_zero_angle()) return false;
    return true;
}

}  // namespace detail

inline RowType make_row_type(const Protoset& ps, const RowDecl& d) {
    const Prototile* t = ps.find(d.tile);
    if (!t) throw RowError("row " + d.id + ": unknown tile " + d.tile);
    RowType r;
    r.decl = d;
    r.pose = d.half_turn ? Isometry::rotation(-1, 0) : Isometry::identity();
    if (d.top.empty() || d.bottom.empty()) throw RowError("row " + d.id + ": empty top or bottom");
    auto chain = [&](const std::vector<size_t>& idx) {
        std::vector<Segment> c;
        for (size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] >= t->size()) throw RowError("row " + d.id + ": no edge " + std::to_string(idx[k]));
            Segment s = placed_edge(*t, r.pose, idx[k]);
            if (k && !(c.back().b == s.a)) throw RowError("row " + d.id + ": edges are not consecutive");
            c.push_back(s);
        }
        return c;
    };
    r.top_chain = chain(d.top);
    r.bottom_chain = chain(d.bottom);
    Vec db = r.bottom_chain.back().b - r.bottom_chain.front().a;
    Vec dt = r.top_chain.front().a - r.top_chain.back().b;
    if (!db.y.is_zero() || db.x.sign() <= 0) throw RowError("row " + d.id + ": bottom period is not a positive horizontal shift");
    if (!(db == dt)) throw RowError("row " + d.id + ": inconsistent signature periods");
    r.period = db.x;
    r.top_signature = detail::signature(*t, r.top_chain, d.top);
    r.bottom_signature = detail::signature(*t, r.bottom_chain, d.bottom);
    r.top_featureless = detail::featureless(r.top_signature);
    r.bottom_featureless = detail::featureless(r.bottom_signature);
    for (size_t e : d.lateral)
        if (!t->labels.at(e).is_plain()) r.lateral_checks.push_back({e, translation_row_check(ps, t->name, e).verdict});
    return r;
}

// row u sits on row v when u's bottom chain lands reversed on v's top chain
inline std::optional<RowEdgeInfo> stack_rows(const Protoset& ps, const RowType& u, const RowType& v) {
    if (!(u.period == v.period)) return std::nullopt;
    Scalar w = u.period;
    auto on_lattice = [&](const Scalar& dx) {
        Scalar k = dx / w;
        return k.is_rational() && k.rat().get_den() == 1;
    };
    if (u.bottom_featureless && v.top_featureless) {
        Scalar dy = v.top_chain.front().a.y - u.bottom_chain.front().a.y;
        return RowEdgeInfo{0, 0, true, Vec{0, dy}};
    }
    PlacementFactory pf(ps);
    const Prototile& tu = *ps.find(u.decl.tile);
    const Prototile& tv = *ps.find(v.decl.tile);
    for (auto& cand : v.top_chain) {
        Vec T = cand.b - u.bottom_chain.front().a;
        bool ok = true;
        for (size_t i = 0; i < u.bottom_chain.size() && ok; ++i) {
            Point a = u.bottom_chain[i].a + T, b = u.bottom_chain[i].b + T;
            bool hit = false;
            for (size_t j = 0; j < v.top_chain.size() && !hit; ++j) {
                const Segment& s = v.top_chain[j];
                Vec da = a - s.b, dbv = b - s.a;
                if (!(da == dbv) || !da.y.is_zero() || !on_lattice(da.x)) continue;
                PlacedTile pu{tu.name, Isometry::translation(T).compose(u.pose)};
                PlacedTile pv{tv.name, Isometry::translation(da).compose(v.pose)};
                hit = edges_compatible(ps, pu, u.decl.bottom[i], pv, v.decl.top[j]);
            }
            ok = hit;
        }
        if (!ok) continue;
        Placement up = pf.make(ps.index_of(tu.name), Isometry::translation(T).compose(u.pose));
        for (long k = -3; k <= 3 && ok; ++k) {
            Placement lo = pf.make(ps.index_of(tv.name), Isometry::translation(Vec{w * Scalar(k), 0}).compose(v.pose));
            if (bbox_overlap(up.box, lo.box) && !interiors_disjoint(up.pieces, lo.pieces)) ok = false;
        }
        if (ok) return RowEdgeInfo{0, 0, false, T};
    }
    return std::nullopt;
}

inline RowGraph build_row_graph(const Protoset& ps, const std::vector<RowDecl>& decls,
                                const std::map<std::string, std::string>& involution = {}) {
    RowGraph g;
    std::map<std::string, size_t> id;
    for (auto& d : decls) {
        if (id.count(d.id)) throw RowError("duplicate row id " + d.id);
        id[d.id] = g.rows.size();
        g.rows.push_back(make_row_type(ps, d));
        g.graph.names.push_back(d.id);
    }
    for (size_t a = 0; a < g.rows.size(); ++a)
        for (size_t b = 0; b < g.rows.size(); ++b)
            if (auto e = stack_rows(ps, g.rows[a], g.rows[b])) {
                e->from = a;
                e->to = b;
                g.edges.push_back(*e);
                g.graph.edges.push_back({a, b, e->continuum});
            }
    for (auto& [x, y] : involution) {
        if (!id.count(x) || !id.count(y)) throw RowError("involution names an unknown row");
        g.graph.involution[id[x]] = id[y];
    }
    if (!g.graph.involution.empty() && g.graph.involution.size() != g.rows.size())
        throw RowError("involution must cover every row");
    return g;
}

inline RowGraph build_row_graph(const Protoset& ps) {
    if (ps.rows.is_null()) throw RowError("protoset declares no rows");
    return build_row_graph(ps, row_decls_from_json(ps.rows), row_involution_from_json(ps.rows));
}

inline json verdict_to_json(const Digraph& g, const CardinalityVerdict& v) {
    json j;
    j["class"] = cardinality_name(v.kind);
    if (v.kind == Cardinality::finite) j["count"] = v.count;
    json w = json::array();
    auto names = [&](const std::vector<size_t>& p) {
        json a = json::array();
        for (size_t x : p) a.push_back(g.names[x]);
        return a;
    };
    if (v.continuum_edge) w.push_back({{"continuum_edge", {g.names[v.continuum_edge->first], g.names[v.continuum_edge->second]}}});
    if (v.kind == Cardinality::uncountable && v.witness.size() == 2)
        w.push_back({{"cycle", names(v.witness[0])}, {"other_cycle", names(v.witness[1])}});
    if (v.kind == Cardinality::countably_infinite)
        w.push_back({{"cycle_a", names(v.witness[0])}, {"path_a", names(v.witness[1])}, {"pumped", names(v.witness[2])},
                     {"path_b", names(v.witness[3])}, {"cycle_b", names(v.witness[4])}});
    for (auto& c : v.classes) w.push_back(describe(g, c));
    j["witnesses"] = w;
    return j;
}

}  // namespace sigma
