#pragma once

#include "geometry.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace sigma {

using json = nlohmann::ordered_json;

enum class EdgeKind { plain, bump, nick };

struct EdgeLabel {
    EdgeKind kind = EdgeKind::plain;
    std::string key;

    static EdgeLabel plain() { return {}; }
    static EdgeLabel bump(std::string k) { return {EdgeKind::bump, std::move(k)}; }
    static EdgeLabel nick(std::string k) { return {EdgeKind::nick, std::move(k)}; }
    friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
    bool is_plain() const { return kind == EdgeKind::plain; }

    std::string str() const {
        switch (kind) {
            case EdgeKind::plain: return "plain";
            case EdgeKind::bump: return "bump:" + key;
            default: return "nick:" + key;
        }
    }
};

// bump(k) fits nick(k) only; plain fits plain
inline bool labels_compatible(const EdgeLabel& a, const EdgeLabel& b) {
    if (a.is_plain() || b.is_plain()) return a.is_plain() && b.is_plain();
    return a.kind != b.kind && a.key == b.key;
}

struct Segment {
    Point a, b;
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct Prototile {
    std::string name;
    std::string color = "#cccccc";
    Polygon boundary;
    std::vector<EdgeLabel> labels;
    std::vector<Segment> marks;
    std::optional<std::string> group_tag;

    size_t size() const { return boundary.size(); }
    const Point& vertex(size_t i) const { return boundary[i % boundary.size()]; }
    Scalar edge_len2(size_t i) const { return norm2(vertex(i + 1) - vertex(i)); }
    Scalar area2() const { return sigma::area2(boundary); }
    Turn corner(size_t j) const { return corner_turn(boundary, j); }
};

struct Protoset {
    std::string name;
    bool reflections_allowed = true;
    std::vector<Prototile> tiles;
    std::string notes;
    json rows;       // optional row declarations
    json convexify;  // optional plan and wedge spec

    const Prototile* find(const std::string& n) const {
        for (auto& t : tiles)
            if (t.name == n) return &t;
        return nullptr;
    }
    size_t index_of(const std::string& n) const {
        for (size_t i = 0; i < tiles.size(); ++i)
            if (tiles[i].name == n) return i;
        throw std::out_of_range("unknown prototile " + n);
    }
};

struct PlacedTile {
    std::string prototile;
    Isometry pose;
};

// ---------------------------------------------------------------- validation

inline std::vector<std::string> validate_prototile(const Prototile& t) {
    std::vector<std::string> r;
    if (t.boundary.size() < 3) {
        r.push_back("fewer than 3 vertices");
        return r;
    }
    if (t.labels.size() != t.boundary.size()) r.push_back("label count mismatch");
    if (!is_simple(t.boundary)) {
        r.push_back("not simple");
        return r;
    }
    if (t.area2().sign() <= 0) r.push_back("not counter-clockwise or zero area");
    if (has_collinear_triple(t.boundary)) r.push_back("collinear consecutive triple");
    for (auto& l : t.labels)
        if (!l.is_plain() && l.key.empty()) r.push_back("keyed label without key");
    for (size_t i = 0; i < t.marks.size(); ++i)
        if (point_in_polygon(t.marks[i].a, t.boundary) < 0 || point_in_polygon(t.marks[i].b, t.boundary) < 0)
            r.push_back("mark " + std::to_string(i) + " outside tile");
    return r;
}

inline std::vector<std::string> validate_protoset(const Protoset& ps) {
    std::vector<std::string> r;
    std::set<std::string> names;
    for (auto& t : ps.tiles) {
        if (!names.insert(t.name).second) r.push_back("duplicate prototile name " + t.name);
        for (auto& m : validate_prototile(t)) r.push_back(t.name + ": " + m);
    }
    if (!r.empty()) return r;
    for (size_t i = 0; i < ps.tiles.size(); ++i)
        for (size_t j = i + 1; j < ps.tiles.size(); ++j) {
            auto g = congruent(ps.tiles[i].boundary, ps.tiles[j].boundary, ps.reflections_allowed);
            if (!g) continue;
            // keyed labels can still tell congruent outlines apart
            bool same_labels = true;
            const auto& a = ps.tiles[i];
            const auto& b = ps.tiles[j];
            Polygon img = transform(*g, a.boundary);
            for (size_t e = 0; e < a.size() && same_labels; ++e) {
                Point p = g->apply(a.vertex(e)), q = g->apply(a.vertex(e + 1));
                for (size_t f = 0; f < b.size(); ++f) {
                    bool hit = g->reflected ? (b.vertex(f) == q && b.vertex(f + 1) == p)
                                            : (b.vertex(f) == p && b.vertex(f + 1) == q);
                    if (hit && !(a.labels[e] == b.labels[f])) same_labels = false;
                }
            }
            if (same_labels) r.push_back("prototiles " + a.name + " and " + b.name + " are congruent");
        }
    return r;
}

// ---------------------------------------------------------------- placed tiles

inline Point placed_vertex(const Prototile& t, const Isometry& g, size_t i) { return g.apply(t.vertex(i)); }

// placed edge i as a directed segment in ccw order of the placed tile
inline Segment placed_edge(const Prototile& t, const Isometry& g, size_t i) {
    Point a = g.apply(t.vertex(i)), b = g.apply(t.vertex(i + 1));
    if (g.reflected) std::swap(a, b);
    return {a, b};
}

// labels are chiral: a flipped bump only fits a flipped nick
inline bool edges_compatible(const Protoset& ps, const PlacedTile& a, size_t ea, const PlacedTile& b, size_t eb) {
    const Prototile* ta = ps.find(a.prototile);
    const Prototile* tb = ps.find(b.prototile);
    if (!ta || !tb) return false;
    Segment sa = placed_edge(*ta, a.pose, ea), sb = placed_edge(*tb, b.pose, eb);
    if (!(sa.a == sb.b && sa.b == sb.a)) return false;
    const EdgeLabel &la = ta->labels[ea], &lb = tb->labels[eb];
    if (!labels_compatible(la, lb)) return false;
    if (!la.is_plain() && a.pose.reflected != b.pose.reflected) return false;
    return true;
}

// ---------------------------------------------------------------- json

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json scalar_to_json(const Scalar& s) {
    auto q = [](const mpq_class& v) {
        json a = json::array();
        a.push_back(v.get_num().fits_slong_p() ? json(v.get_num().get_si()) : json(v.get_num().get_str()));
        a.push_back(v.get_den().fits_slong_p() ? json(v.get_den().get_si()) : json(v.get_den().get_str()));
        return a;
    };
    json j;
    j["r"] = q(s.rat());
    j["s3"] = q(s.root3());
    return j;
}

namespace detail {

inline mpz_class int_field(const json& v, const std::string& where) {
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) != 0) throw ParseError(where + ": malformed integer");
        return z;
    }
    throw ParseError(where + ": expected integer");
}

inline mpq_class rational_field(const json& v, const std::string& where) {
    if (v.is_number_integer()) return mpq_class(int_field(v, where));
    if (v.is_string()) {
        // "p/q" shorthand
        std::string s = v.get<std::string>();
        auto k = s.find('/');
        mpz_class n, d = 1;
        if (n.set_str(s.substr(0, k), 10) != 0) throw ParseError(where + ": malformed rational");
        if (k != std::string::npos && d.set_str(s.substr(k + 1), 10) != 0)
            throw ParseError(where + ": malformed rational");
        if (d == 0) throw ParseError(where + ": zero denominator");
        mpq_class q(n, d);
        q.canonicalize();
        return q;
    }
    if (!v.is_array() || v.size() != 2) throw ParseError(where + ": expected [num, den]");
    mpz_class n = int_field(v[0], where + "[0]"), d = int_field(v[1], where + "[1]");
    if (d == 0) throw ParseError(where + ": zero denominator");
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

}  // namespace detail

inline Scalar scalar_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer() || j.is_string()) return Scalar(detail::rational_field(j, where));
    if (!j.is_object()) throw ParseError(where + ": expected scalar object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "r" && it.key() != "s3") throw ParseError(where + ": unknown scalar field " + it.key());
    mpq_class r = j.contains("r") ? detail::rational_field(j["r"], where + ".r") : mpq_class(0);
    mpq_class s = j.contains("s3") ? detail::rational_field(j["s3"], where + ".s3") : mpq_class(0);
    return Scalar(r, s);
}

inline json point_to_json(const Point& p) { return json::array({scalar_to_json(p.x), scalar_to_json(p.y)}); }

inline Point point_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [x, y]");
    return {scalar_from_json(j[0], where + "[0]"), scalar_from_json(j[1], where + "[1]")};
}

inline EdgeLabel label_from_json(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected label string");
    std::string s = j.get<std::string>();
    if (s == "plain") return EdgeLabel::plain();
    auto k = s.find(':');
    std::string kind = s.substr(0, k);
    std::string key = k == std::string::npos ? "" : s.substr(k + 1);
    if (key.empty()) throw ParseError(where + ": missing key in " + s);
    if (kind == "bump") return EdgeLabel::bump(key);
    if (kind == "nick") return EdgeLabel::nick(key);
    throw ParseError(where + ": unknown label kind " + kind);
}

inline json prototile_to_json(const Prototile& t) {
    json j;
    j["name"] = t.name;
    j["color"] = t.color;
    json b = json::array();
    for (auto& p : t.boundary) b.push_back(point_to_json(p));
    j["boundary"] = b;
    json l = json::array();
    for (auto& x : t.labels) l.push_back(x.str());
    j["labels"] = l;
    if (!t.marks.empty()) {
        json m = json::array();
        for (auto& s : t.marks) m.push_back(json::array({point_to_json(s.a), point_to_json(s.b)}));
        j["marks"] = m;
    }
    if (t.group_tag) j["group_tag"] = *t.group_tag;
    return j;
}

inline Prototile prototile_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected object");
    static const std::set<std::string> known = {"name", "color", "boundary", "labels", "marks", "group_tag"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ParseError(where + ": unknown field " + it.key());
    Prototile t;
    if (!j.contains("name") || !j["name"].is_string()) throw ParseError(where + ".name: expected string");
    t.name = j["name"];
    if (j.contains("color")) t.color = j["color"].get<std::string>();
    if (!j.contains("boundary") || !j["boundary"].is_array()) throw ParseError(where + ".boundary: expected array");
    for (size_t i = 0; i < j["boundary"].size(); ++i)
        t.boundary.push_back(point_from_json(j["boundary"][i], where + ".boundary[" + std::to_string(i) + "]"));
    if (!j.contains("labels") || !j["labels"].is_array()) throw ParseError(where + ".labels: expected array");
    for (size_t i = 0; i < j["labels"].size(); ++i)
        t.labels.push_back(label_from_json(j["labels"][i], where + ".labels[" + std::to_string(i) + "]"));
    if (j.contains("marks")) {
        const json& m = j["marks"];
        if (!m.is_array()) throw ParseError(where + ".marks: expected array");
        for (size_t i = 0; i < m.size(); ++i) {
            std::string w = where + ".marks[" + std::to_string(i) + "]";
            if (!m[i].is_array() || m[i].size() != 2) throw ParseError(w + ": expected [p, q]");
            t.marks.push_back({point_from_json(m[i][0], w), point_from_json(m[i][1], w)});
        }
    }
    if (j.contains("group_tag")) t.group_tag = j["group_tag"].get<std::string>();
    return t;
}

inline json protoset_to_json(const Protoset& ps) {
    json j;
    j["name"] = ps.name;
    j["reflections_allowed"] = ps.reflections_allowed;
    json t = json::array();
    for (auto& x : ps.tiles) t.push_back(prototile_to_json(x));
    j["tiles"] = t;
    j["notes"] = ps.notes;
    if (!ps.rows.is_null()) j["rows"] = ps.rows;
    if (!ps.convexify.is_null()) j["convexify"] = ps.convexify;
    return j;
}

// structural parse; invariant checks are left to validate_protoset except duplicate names
inline Protoset protoset_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("$: expected object");
    static const std::set<std::string> known = {"name", "reflections_allowed", "tiles", "notes", "rows", "convexify"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ParseError("$: unknown field " + it.key());
    Protoset ps;
    if (!j.contains("name") || !j["name"].is_string()) throw ParseError("$.name: expected string");
    ps.name = j["name"];
    if (j.contains("reflections_allowed")) {
        if (!j["reflections_allowed"].is_boolean()) throw ParseError("$.reflections_allowed: expected boolean");
        ps.reflections_allowed = j["reflections_allowed"];
    }
    if (!j.contains("tiles") || !j["tiles"].is_array()) throw ParseError("$.tiles: expected array");
    std::set<std::string> names;
    for (size_t i = 0; i < j["tiles"].size(); ++i) {
        Prototile t = prototile_from_json(j["tiles"][i], "$.tiles[" + std::to_string(i) + "]");
        if (!names.insert(t.name).second) throw ParseError("$.tiles[" + std::to_string(i) + "]: duplicate name " + t.name);
        ps.tiles.push_back(std::move(t));
    }
    if (j.contains("notes")) ps.notes = j["notes"].get<std::string>();
    if (j.contains("rows")) ps.rows = j["rows"];
    if (j.contains("convexify")) ps.convexify = j["convexify"];
    return ps;
}

inline Protoset parse_protoset(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("json: ") + e.what());
    }
    return protoset_from_json(j);
}

inline std::string dump_protoset(const Protoset& ps) { return protoset_to_json(ps).dump(1) + "\n"; }

}  // namespace sigma
