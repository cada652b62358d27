#pragma once

#include "protoset.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigma {

// base angle at the designated endpoint and apex position along the chord
struct WedgeSpec {
    Turn alpha{5, 2};
    Scalar apex_param = Scalar::frac(1, 4);

    void check() const {
        if (!(alpha.dot.sign() > 0 && alpha.cross.sign() > 0)) throw std::invalid_argument("wedge angle outside (0, 90)");
        if (!(apex_param.sign() > 0 && apex_param < Scalar(1))) throw std::invalid_argument("apex parameter outside (0, 1)");
        if (apex_param == Scalar::frac(1, 2)) throw std::invalid_argument("symmetric apex");
    }
    Scalar slope() const { return alpha.cross / alpha.dot; }
};

// apex of a bump on the ccw edge a->b; the bump starts at a
inline Point bump_apex(const Point& a, const Point& b, const WedgeSpec& w) {
    Vec d = b - a;
    return a + d * w.apex_param - perp(d) * (w.apex_param * w.slope());
}

// nick on a->b is the complement of the partner bump running b->a
inline Point nick_apex(const Point& a, const Point& b, const WedgeSpec& w) {
    Vec d = a - b;
    return b + d * w.apex_param - perp(d) * (w.apex_param * w.slope());
}

struct WedgedTile {
    Prototile tile;                  // plain-labelled polygon
    std::vector<size_t> vertex_pos;  // position of original vertex i in tile.boundary
    std::vector<long> apex_pos;      // position of apex on original edge i, or -1
};

inline WedgedTile wedgeify_detail(const Prototile& t, const WedgeSpec& w) {
    w.check();
    WedgedTile out;
    out.tile.name = t.name;
    out.tile.color = t.color;
    out.tile.group_tag = t.group_tag;
    size_t n = t.size();
    for (size_t i = 0; i < n; ++i) {
        out.vertex_pos.push_back(out.tile.boundary.size());
        out.tile.boundary.push_back(t.vertex(i));
        out.tile.labels.push_back(EdgeLabel::plain());
        const EdgeLabel& l = t.labels[i];
        if (l.is_plain()) {
            out.apex_pos.push_back(-1);
            continue;
        }
        out.apex_pos.push_back(static_cast<long>(out.tile.boundary.size()));
        Point p = l.kind == EdgeKind::bump ? bump_apex(t.vertex(i), t.vertex(i + 1), w)
                                           : nick_apex(t.vertex(i), t.vertex(i + 1), w);
        out.tile.boundary.push_back(p);
        out.tile.labels.push_back(EdgeLabel::plain());
    }
    auto report = validate_prototile(out.tile);
    if (!report.empty()) throw std::runtime_error("degenerate wedge on " + t.name + ": " + report.front());
    return out;
}

inline Prototile wedgeify(const Prototile& t, const WedgeSpec& w) { return wedgeify_detail(t, w).tile; }

// ---------------------------------------------------------------- planar faces

struct PlanarGraph {
    std::vector<Point> pts;
    std::vector<std::vector<size_t>> adj;

    size_t add_point(const Point& p) {
        for (size_t i = 0; i < pts.size(); ++i)
            if (pts[i] == p) return i;
        pts.push_back(p);
        adj.emplace_back();
        return pts.size() - 1;
    }
    void add_edge(size_t a, size_t b) {
        if (a == b) throw std::invalid_argument("degenerate chord");
        for (size_t x : adj[a])
            if (x == b) return;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    // bounded faces as vertex index cycles, ccw
    std::vector<std::vector<size_t>> faces() const {
        size_t n = pts.size();
        std::vector<std::vector<size_t>> order(n);
        for (size_t v = 0; v < n; ++v) {
            order[v] = adj[v];
            std::sort(order[v].begin(), order[v].end(), [&](size_t a, size_t b) {
                Vec da = pts[a] - pts[v], db = pts[b] - pts[v];
                return cmp_arg(Turn(da.x, da.y), Turn(db.x, db.y)) < 0;
            });
        }
        auto next = [&](size_t u, size_t v) {
            const auto& o = order[v];
            size_t k = std::find(o.begin(), o.end(), u) - o.begin();
            return o[(k + o.size() - 1) % o.size()];
        };
        std::set<std::pair<size_t, size_t>> seen;
        std::vector<std::vector<size_t>> out;
        for (size_t u = 0; u < n; ++u)
            for (size_t v : order[u]) {
                if (seen.count({u, v})) continue;
                std::vector<size_t> f;
                size_t a = u, b = v;
                while (!seen.count({a, b})) {
                    seen.insert({a, b});
                    f.push_back(a);
                    size_t c = next(a, b);
                    a = b;
                    b = c;
                }
                Polygon poly;
                for (size_t i : f) poly.push_back(pts[i]);
                if (area2(poly).sign() > 0) out.push_back(f);
            }
        return out;
    }
};

// ---------------------------------------------------------------- plans

// endpoint references: "v3" original vertex, "w3" apex on original edge 3, or a named point
struct TilePlan {
    std::map<std::string, Point> points;
    std::vector<std::pair<std::string, std::string>> chords;
    std::map<std::string, std::pair<std::string, std::string>> piece_names;  // name -> directed edge on its boundary
};

struct SubdivisionPlan {
    std::map<std::string, TilePlan> tiles;
    std::map<std::string, std::string> named;  // construction letter -> reference "tile:ref"
    std::vector<std::string> c2_exempt;
    std::vector<std::string> identity_sites;  // "tile:ref" nick apexes whose full turn is part of the design
};

inline Point resolve_ref(const WedgedTile& wt, const TilePlan& plan, const std::string& ref) {
    auto it = plan.points.find(ref);
    if (it != plan.points.end()) return it->second;
    if (ref.size() >= 2 && (ref[0] == 'v' || ref[0] == 'w') && std::isdigit(static_cast<unsigned char>(ref[1]))) {
        size_t i = std::stoul(ref.substr(1));
        if (ref[0] == 'v') {
            if (i >= wt.vertex_pos.size()) throw std::invalid_argument("no vertex " + ref);
            return wt.tile.boundary[wt.vertex_pos[i]];
        }
        if (i >= wt.apex_pos.size() || wt.apex_pos[i] < 0) throw std::invalid_argument("no apex " + ref);
        return wt.tile.boundary[static_cast<size_t>(wt.apex_pos[i])];
    }
    throw std::invalid_argument("unknown reference " + ref);
}

struct Piece {
    std::string name;
    Polygon boundary;          // in the frame of the original tile
    std::vector<bool> inner;   // edge i is a chord
};

// split a wedged tile along plan chords; every piece must be convex
inline std::vector<Piece> subdivide(const WedgedTile& wt, const TilePlan& plan) {
    const Polygon& bd = wt.tile.boundary;
    PlanarGraph g;
    size_t n = bd.size();
    for (auto& p : bd) g.add_point(p);
    for (size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    std::vector<std::pair<Point, Point>> segs;
    for (auto& [ra, rb] : plan.chords) segs.push_back({resolve_ref(wt, plan, ra), resolve_ref(wt, plan, rb)});
    for (size_t i = 0; i < segs.size(); ++i) {
        auto& [a, b] = segs[i];
        if (a == b) throw std::invalid_argument("degenerate chord");
        // chords stay inside the tile and meet others only at endpoints
        Point mid = (a + b) * Scalar::frac(1, 2);
        if (point_in_polygon(mid, bd) <= 0) throw std::invalid_argument("chord leaves the tile");
        if (point_in_polygon(a, bd) < 0 || point_in_polygon(b, bd) < 0) throw std::invalid_argument("chord endpoint outside");
        for (size_t k = 0; k < n; ++k) {
            const Point &c = bd[k], &d = bd[(k + 1) % n];
            if (segments_cross_properly(a, b, c, d)) throw std::invalid_argument("chord crosses boundary");
            for (const Point* q : {&c})
                if (!(*q == a) && !(*q == b) && on_segment(*q, a, b)) throw std::invalid_argument("chord passes through vertex");
        }
        for (size_t j = 0; j < i; ++j) {
            auto& [c, d] = segs[j];
            if (segments_cross_properly(a, b, c, d)) throw std::invalid_argument("chords cross");
            for (const Point* q : {&c, &d})
                if (!(*q == a) && !(*q == b) && on_segment(*q, a, b)) throw std::invalid_argument("chords overlap");
        }
        g.add_edge(g.add_point(a), g.add_point(b));
    }
    for (size_t v = n; v < g.pts.size(); ++v)
        if (g.adj[v].size() < 2) throw std::invalid_argument("chord ends strictly inside a piece");

    std::set<std::pair<size_t, size_t>> boundary_edges;
    for (size_t i = 0; i < n; ++i) boundary_edges.insert({i, (i + 1) % n});

    std::vector<Piece> out;
    Scalar total = 0;
    for (auto& f : g.faces()) {
        Piece pc;
        std::set<size_t> uniq(f.begin(), f.end());
        if (uniq.size() != f.size()) throw std::invalid_argument("chord ends strictly inside a piece");
        for (size_t k = 0; k < f.size(); ++k) {
            pc.boundary.push_back(g.pts[f[k]]);
            pc.inner.push_back(!boundary_edges.count({f[k], f[(k + 1) % f.size()]}));
        }
        if (!convexity(pc.boundary)) throw std::runtime_error("non-convex piece in " + wt.tile.name);
        total += area2(pc.boundary);
        out.push_back(std::move(pc));
    }
    if (!(total == area2(bd))) throw std::runtime_error("pieces do not partition " + wt.tile.name);

    // names from the plan, then a deterministic fallback
    for (auto& [name, e] : plan.piece_names) {
        Point a = resolve_ref(wt, plan, e.first), b = resolve_ref(wt, plan, e.second);
        bool found = false;
        for (auto& pc : out)
            for (size_t k = 0; k < pc.boundary.size(); ++k)
                if (pc.boundary[k] == a && pc.boundary[(k + 1) % pc.boundary.size()] == b) {
                    pc.name = name;
                    found = true;
                }
        if (!found) throw std::invalid_argument("piece label " + name + " matches no edge");
    }
    size_t k = 0;
    for (auto& pc : out)
        if (pc.name.empty()) pc.name = wt.tile.name + "." + std::to_string(k++);
    return out;
}

}  // namespace sigma
