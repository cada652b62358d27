#pragma once

#include "builtins.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sigma {

// part of segment ab inside a convex ccw polygon, if it has positive length
inline std::optional<Segment> clip_to_convex(const Point& a, const Point& b, const Polygon& poly) {
    Scalar lo = 0, hi = 1;
    Vec d = b - a;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Point &e0 = poly[i], &e1 = poly[(i + 1) % poly.size()];
        Vec e = e1 - e0;
        Scalar f0 = cross(e, a - e0), f1 = cross(e, d);
        // f0 + t f1 >= 0
        if (f1.is_zero()) {
            if (f0.sign() < 0) return std::nullopt;
            continue;
        }
        Scalar t = -f0 / f1;
        if (f1.sign() > 0) lo = std::max(lo, t);
        else hi = std::min(hi, t);
    }
    if (!(lo < hi)) return std::nullopt;
    return Segment{a + d * lo, a + d * hi};
}

struct Occurrence {
    std::string piece;
    Isometry pose;  // piece frame -> original tile frame
};

struct ConvexBuild {
    Protoset derived;
    std::map<std::string, std::vector<Occurrence>> occurrences;  // by original tile
    std::map<std::string, std::vector<bool>> inner;              // chord edges per piece prototile
    std::map<std::string, std::pair<std::string, Point>> named;  // letter -> (original tile, point)
    std::map<std::string, WedgedTile> wedged;
};

inline json wedge_to_json(const WedgeSpec& w) {
    json j;
    j["alpha"] = json::array({scalar_to_json(w.alpha.dot), scalar_to_json(w.alpha.cross)});
    j["apex_param"] = scalar_to_json(w.apex_param);
    return j;
}

inline WedgeSpec wedge_from_json(const json& j) {
    WedgeSpec w;
    if (!j.contains("alpha") || !j["alpha"].is_array() || j["alpha"].size() != 2)
        throw ParseError("convexify.wedge.alpha: expected [dot, cross]");
    w.alpha = Turn(scalar_from_json(j["alpha"][0], "convexify.wedge.alpha[0]"),
                   scalar_from_json(j["alpha"][1], "convexify.wedge.alpha[1]"));
    w.apex_param = scalar_from_json(j.at("apex_param"), "convexify.wedge.apex_param");
    return w;
}

inline json plan_to_json(const SubdivisionPlan& p) {
    json j;
    json tiles = json::object();
    for (auto& [name, tp] : p.tiles) {
        json t;
        json pts = json::object();
        for (auto& [k, v] : tp.points) pts[k] = point_to_json(v);
        t["points"] = pts;
        json ch = json::array();
        for (auto& [a, b] : tp.chords) ch.push_back(json::array({a, b}));
        t["chords"] = ch;
        json pn = json::object();
        for (auto& [k, e] : tp.piece_names) pn[k] = json::array({e.first, e.second});
        t["piece_names"] = pn;
        tiles[name] = t;
    }
    j["tiles"] = tiles;
    json named = json::object();
    for (auto& [k, v] : p.named) named[k] = v;
    j["named"] = named;
    j["c2_exempt"] = p.c2_exempt;
    j["identity_sites"] = p.identity_sites;
    return j;
}

inline SubdivisionPlan plan_from_json(const json& j) {
    SubdivisionPlan p;
    if (!j.is_object() || !j.contains("tiles")) throw ParseError("convexify.plan: expected object with tiles");
    for (auto& [name, t] : j["tiles"].items()) {
        TilePlan tp;
        std::string w = "convexify.plan.tiles." + name;
        if (t.contains("points"))
            for (auto& [k, v] : t["points"].items()) tp.points[k] = point_from_json(v, w + ".points." + k);
        if (t.contains("chords"))
            for (auto& c : t["chords"]) {
                if (!c.is_array() || c.size() != 2) throw ParseError(w + ".chords: expected pairs");
                tp.chords.push_back({c[0].get<std::string>(), c[1].get<std::string>()});
            }
        if (t.contains("piece_names"))
            for (auto& [k, e] : t["piece_names"].items()) tp.piece_names[k] = {e[0].get<std::string>(), e[1].get<std::string>()};
        p.tiles[name] = tp;
    }
    if (j.contains("named"))
        for (auto& [k, v] : j["named"].items()) p.named[k] = v.get<std::string>();
    if (j.contains("c2_exempt")) p.c2_exempt = j["c2_exempt"].get<std::vector<std::string>>();
    if (j.contains("identity_sites")) p.identity_sites = j["identity_sites"].get<std::vector<std::string>>();
    return p;
}

// wedge every labelled edge, split along the plan, merge congruent pieces
inline ConvexBuild build_convex(const Protoset& base, const WedgeSpec& spec, const SubdivisionPlan& plan,
                                const std::string& name) {
    ConvexBuild out;
    out.derived.name = name;
    out.derived.reflections_allowed = base.reflections_allowed;
    for (auto& t : base.tiles) {
        auto it = plan.tiles.find(t.name);
        if (it == plan.tiles.end()) throw std::invalid_argument("plan has no entry for " + t.name);
        WedgedTile wt = wedgeify_detail(t, spec);
        std::vector<Piece> pieces = subdivide(wt, it->second);
        std::stable_partition(pieces.begin(), pieces.end(),
                              [](const Piece& p) { return p.name.find('.') == std::string::npos; });
        for (auto& pc : pieces) {
            Prototile* match = nullptr;
            std::optional<Isometry> g;
            for (auto& ex : out.derived.tiles) {
                if (ex.size() != pc.boundary.size()) continue;
                g = congruent(ex.boundary, pc.boundary, base.reflections_allowed);
                if (g) {
                    match = &ex;
                    break;
                }
            }
            if (match) {
                out.occurrences[t.name].push_back({match->name, *g});
                continue;
            }
            Prototile np;
            np.name = pc.name;
            np.color = t.color;
            np.boundary = pc.boundary;
            np.labels.assign(pc.boundary.size(), EdgeLabel::plain());
            np.group_tag = t.name;
            for (size_t e = 0; e < t.size(); ++e)
                if (auto s = clip_to_convex(t.vertex(e), t.vertex(e + 1), pc.boundary)) np.marks.push_back(*s);
            out.inner[np.name] = pc.inner;
            out.occurrences[t.name].push_back({np.name, Isometry::identity()});
            out.derived.tiles.push_back(std::move(np));
        }
        out.wedged.emplace(t.name, std::move(wt));
    }
    for (auto& [letter, ref] : plan.named) {
        auto k = ref.find(':');
        std::string tn = ref.substr(0, k), r = ref.substr(k + 1);
        out.named[letter] = {tn, resolve_ref(out.wedged.at(tn), plan.tiles.at(tn), r)};
    }
    json cj;
    cj["base"] = base.name;
    cj["wedge"] = wedge_to_json(spec);
    cj["plan"] = plan_to_json(plan);
    json occ = json::object();
    for (auto& [tn, list] : out.occurrences) {
        json a = json::array();
        for (auto& o : list) {
            json e;
            e["piece"] = o.piece;
            e["pose"] = {{"c", scalar_to_json(o.pose.c)}, {"s", scalar_to_json(o.pose.s)}, {"tx", scalar_to_json(o.pose.tx)},
                         {"ty", scalar_to_json(o.pose.ty)}, {"reflected", o.pose.reflected}};
            a.push_back(e);
        }
        occ[tn] = a;
    }
    cj["occurrences"] = occ;
    json inner = json::object();
    for (auto& [pn, flags] : out.inner) {
        json a = json::array();
        for (size_t i = 0; i < flags.size(); ++i)
            if (flags[i]) a.push_back(i);
        inner[pn] = a;
    }
    cj["inner_edges"] = inner;
    out.derived.convexify = cj;
    out.derived.notes = "Convex recomposition of " + base.name +
                        ": bumps and nicks replaced by wedges, tiles split into convex pieces that carry the original "
                        "outlines as marks. Coordinates are reconstructed, not taken from a source.";
    return out;
}

}  // namespace sigma
