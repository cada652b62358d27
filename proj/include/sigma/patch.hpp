#pragma once

#include "atlas.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sigma {

struct Adjacency {
    size_t a = 0, ea = 0, b = 0, eb = 0;
};

struct FrontierEdge {
    size_t tile = 0, edge = 0;
};

struct Patch {
    std::vector<PlacedTile> tiles;
    std::vector<Adjacency> adjacency;
    std::vector<FrontierEdge> frontier;
};

inline json isometry_to_json(const Isometry& g) {
    return {{"c", scalar_to_json(g.c)}, {"s", scalar_to_json(g.s)}, {"tx", scalar_to_json(g.tx)},
            {"ty", scalar_to_json(g.ty)}, {"reflected", g.reflected}};
}

inline Isometry isometry_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected pose object");
    Isometry g;
    g.c = scalar_from_json(j.at("c"), where + ".c");
    g.s = scalar_from_json(j.at("s"), where + ".s");
    g.tx = scalar_from_json(j.at("tx"), where + ".tx");
    g.ty = scalar_from_json(j.at("ty"), where + ".ty");
    g.reflected = j.value("reflected", false);
    if (!(g.c * g.c + g.s * g.s == Scalar(1))) throw ParseError(where + ": rotation part is not unit");
    return g;
}

inline json patch_to_json(const Patch& p) {
    json a = json::array();
    for (auto& t : p.tiles) a.push_back({{"prototile", t.prototile}, {"pose", isometry_to_json(t.pose)}});
    return a;
}

inline Patch patch_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("patch: expected a list of placed tiles");
    Patch p;
    for (size_t i = 0; i < j.size(); ++i) {
        std::string w = "patch[" + std::to_string(i) + "]";
        if (!j[i].contains("prototile")) throw ParseError(w + ": missing prototile");
        p.tiles.push_back({j[i]["prototile"].get<std::string>(), isometry_from_json(j[i].at("pose"), w + ".pose")});
    }
    return p;
}

// ---------------------------------------------------------------- placed geometry

struct WorldEdge {
    Point a, b;  // ccw along the placed tile
    size_t proto_edge = 0;
};

struct Placement {
    size_t proto = 0;
    Isometry pose;
    Polygon poly;  // ccw
    std::vector<WorldEdge> edges;
    std::vector<Polygon> pieces;
    BBox box{};
};

class PlacementFactory {
public:
    explicit PlacementFactory(const Protoset& ps) : ps_(ps) {
        for (auto& t : ps.tiles) local_pieces_.push_back(convexity(t.boundary) ? std::vector<Polygon>{t.boundary} : triangulate(t.boundary));
    }
    const Protoset& protoset() const { return ps_; }

    Placement make(size_t proto, const Isometry& g) const {
        const Prototile& t = ps_.tiles[proto];
        Placement p;
        p.proto = proto;
        p.pose = g;
        p.poly = transform(g, t.boundary);
        for (size_t i = 0; i < t.size(); ++i) {
            Segment s = placed_edge(t, g, i);
            p.edges.push_back({s.a, s.b, i});
        }
        for (auto& q : local_pieces_[proto]) p.pieces.push_back(transform(g, q));
        p.box = bbox(p.poly);
        return p;
    }
    Placement make(const PlacedTile& pt) const { return make(ps_.index_of(pt.prototile), pt.pose); }

private:
    const Protoset& ps_;
    std::vector<std::vector<Polygon>> local_pieces_;
};

// canonical text of a placement as labelled world edges
inline std::string placement_key(const Protoset& ps, const Placement& p, const Isometry* g = nullptr) {
    const Prototile& t = ps.tiles[p.proto];
    std::vector<std::string> parts;
    for (auto& e : p.edges) {
        Point a = g ? g->apply(e.a) : e.a, b = g ? g->apply(e.b) : e.b;
        if (g && g->reflected) std::swap(a, b);
        parts.push_back(a.x.str() + "," + a.y.str() + ">" + b.x.str() + "," + b.y.str() + ":" + t.labels[e.proto_edge].str());
    }
    std::sort(parts.begin(), parts.end());
    std::string s = t.name + "[";
    for (auto& x : parts) s += x + ";";
    return s + "]";
}

// label-preserving self-isometries of a prototile
inline std::vector<Isometry> tile_symmetries(const Prototile& t) {
    std::vector<Isometry> out;
    size_t n = t.size();
    for (int r = 0; r <= 1; ++r)
        for (size_t k = 0; k < n; ++k) {
            auto g = r ? align(t.vertex(0), t.vertex(1), t.vertex(k + 1), t.vertex(k), true)
                       : align(t.vertex(0), t.vertex(1), t.vertex(k), t.vertex(k + 1), false);
            if (!g) continue;
            bool ok = true;
            for (size_t i = 0; i < n && ok; ++i) {
                Point a = g->apply(t.vertex(i)), b = g->apply(t.vertex(i + 1));
                if (r) std::swap(a, b);
                bool hit = false;
                for (size_t j = 0; j < n; ++j)
                    if (t.vertex(j) == a && t.vertex(j + 1) == b && t.labels[j] == t.labels[i]) hit = true;
                ok = hit;
            }
            if (ok) out.push_back(*g);
        }
    return out;
}

// ---------------------------------------------------------------- congruence of patches

inline std::string patch_description(const Protoset& ps, const std::vector<Placement>& pl, const Isometry& g) {
    std::vector<std::string> keys;
    for (auto& p : pl) keys.push_back(placement_key(ps, p, &g));
    std::sort(keys.begin(), keys.end());
    std::string s;
    for (auto& k : keys) s += k + "\n";
    return s;
}

// minimal description over isometries that carry some tile onto its prototile frame
inline std::string canonical_form(const Protoset& ps, const Patch& patch) {
    PlacementFactory pf(ps);
    std::vector<Placement> pl;
    for (auto& t : patch.tiles) pl.push_back(pf.make(t));
    std::string best;
    bool first = true;
    std::map<size_t, std::vector<Isometry>> sym;
    for (auto& p : pl) {
        auto it = sym.find(p.proto);
        if (it == sym.end()) it = sym.emplace(p.proto, tile_symmetries(ps.tiles[p.proto])).first;
        Isometry inv = p.pose.inverse();
        for (auto& s : it->second) {
            std::string d = patch_description(ps, pl, s.compose(inv));
            if (first || d < best) {
                best = d;
                first = false;
            }
        }
    }
    return best;
}

inline bool patches_congruent(const Protoset& ps, const Patch& a, const Patch& b) {
    if (a.tiles.size() != b.tiles.size()) return false;
    std::multiset<std::string> na, nb;
    for (auto& t : a.tiles) na.insert(t.prototile);
    for (auto& t : b.tiles) nb.insert(t.prototile);
    if (na != nb) return false;
    return canonical_form(ps, a) == canonical_form(ps, b);
}

// ---------------------------------------------------------------- verification

inline bool collinear_overlap(const Point& a, const Point& b, const Point& c, const Point& d) {
    if (orient(a, b, c) != 0 || orient(a, b, d) != 0) return false;
    Vec u = b - a;
    Scalar tc = dot(c - a, u), td = dot(d - a, u), l = norm2(u);
    Scalar lo = std::max(Scalar(0), std::min(tc, td)), hi = std::min(l, std::max(tc, td));
    return lo < hi;
}

// the edge pair is legal: labelled edges meet only a full, reversed, compatible partner
inline bool contact_ok(const Protoset& ps, const Placement& x, const WorldEdge& ex, const Placement& y, const WorldEdge& ey) {
    if (!collinear_overlap(ex.a, ex.b, ey.a, ey.b)) return true;
    const EdgeLabel& lx = ps.tiles[x.proto].labels[ex.proto_edge];
    const EdgeLabel& ly = ps.tiles[y.proto].labels[ey.proto_edge];
    if (lx.is_plain() && ly.is_plain()) return true;
    if (!(ex.a == ey.b && ex.b == ey.a)) return false;
    if (!labels_compatible(lx, ly)) return false;
    return x.pose.reflected == y.pose.reflected;
}

inline void finalize(const Protoset& ps, Patch& patch) {
    PlacementFactory pf(ps);
    std::vector<Placement> pl;
    for (auto& t : patch.tiles) pl.push_back(pf.make(t));
    patch.adjacency.clear();
    patch.frontier.clear();
    for (size_t i = 0; i < pl.size(); ++i)
        for (auto& e : pl[i].edges) {
            bool matched = false;
            for (size_t j = 0; j < pl.size(); ++j) {
                if (j == i) continue;
                for (auto& f : pl[j].edges)
                    if (e.a == f.b && e.b == f.a) {
                        matched = true;
                        if (i < j) patch.adjacency.push_back({i, e.proto_edge, j, f.proto_edge});
                    }
            }
            if (!matched) patch.frontier.push_back({i, e.proto_edge});
        }
}

inline std::vector<std::string> verify_patch(const Protoset& ps, const Patch& patch) {
    std::vector<std::string> r;
    PlacementFactory pf(ps);
    std::vector<Placement> pl;
    for (size_t i = 0; i < patch.tiles.size(); ++i) {
        if (!ps.find(patch.tiles[i].prototile)) {
            r.push_back("tile " + std::to_string(i) + ": unknown prototile");
            return r;
        }
        if (patch.tiles[i].pose.reflected && !ps.reflections_allowed) r.push_back("tile " + std::to_string(i) + ": reflected");
        pl.push_back(pf.make(patch.tiles[i]));
    }
    for (size_t i = 0; i < pl.size(); ++i)
        for (size_t j = i + 1; j < pl.size(); ++j) {
            if (bbox_overlap(pl[i].box, pl[j].box) && !interiors_disjoint(pl[i].pieces, pl[j].pieces))
                r.push_back("tiles " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
            for (auto& e : pl[i].edges)
                for (auto& f : pl[j].edges)
                    if (!contact_ok(ps, pl[i], e, pl[j], f))
                        r.push_back("tiles " + std::to_string(i) + " and " + std::to_string(j) + ": illegal contact on edges " +
                                    std::to_string(e.proto_edge) + "/" + std::to_string(f.proto_edge));
        }
    for (auto& a : patch.adjacency)
        if (a.a >= patch.tiles.size() || a.b >= patch.tiles.size() ||
            !edges_compatible(ps, patch.tiles[a.a], a.ea, patch.tiles[a.b], a.eb))
            r.push_back("adjacency entry fails edge compatibility");
    return r;
}

// ---------------------------------------------------------------- angle gaps

// can a multiset of corner angles (straight angles allowed) fill exactly this angle
class GapFiller {
public:
    explicit GapFiller(const Protoset& ps, long budget = 2'000'000) : budget_(budget) {
        for (auto& t : ps.tiles)
            for (size_t j = 0; j < t.size(); ++j) add(t.corner(j));
        add(half_turn());
        std::vector<size_t> idx(turns_.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return deg_[a] > deg_[b]; });
        std::vector<Turn> t;
        std::vector<double> d;
        for (size_t i : idx) {
            t.push_back(turns_[i]);
            d.push_back(deg_[i]);
        }
        turns_ = t;
        deg_ = d;
    }

    // target given by its exact measure below a full turn
    bool fillable(const Angle& target) {
        if (target.winding == 0 && target.residual.is_zero_angle()) return true;
        for (auto& [a, r] : memo_)
            if (std::abs(a.approx - target.approx) < 1e-9 && a == target) return r;
        std::vector<size_t> cur;
        long nodes = 0;
        auto rec = [&](auto&& self, size_t from, double acc) -> bool {
            if (++nodes > budget_) throw BudgetExceeded("gap-fill budget exceeded");
            if (!cur.empty() && std::abs(acc - target.approx) < 1e-6) {
                Angle s = Angle::of(Turn(1, 0));
                for (size_t i : cur) s = s + Angle::of(turns_[i]);
                if (s == target) return true;
            }
            for (size_t a = from; a < turns_.size(); ++a) {
                if (acc + deg_[a] > target.approx + 1e-6) continue;
                cur.push_back(a);
                bool ok = self(self, a, acc + deg_[a]);
                cur.pop_back();
                if (ok) return true;
            }
            return false;
        };
        bool r = rec(rec, 0, 0.0);
        memo_.push_back({target, r});
        return r;
    }

private:
    void add(const Turn& t) {
        for (auto& x : turns_)
            if (same_angle(x, t)) return;
        turns_.push_back(t);
        deg_.push_back(t.degrees());
    }
    long budget_;
    std::vector<Turn> turns_;
    std::vector<double> deg_;
    std::vector<std::pair<Angle, bool>> memo_;
};

struct Sector {
    Vec from, to;  // ccw from `from` to `to`
    Turn size;
};

// ---------------------------------------------------------------- the tiler

struct Candidate {
    Placement placement;
    bool slide = false;  // representative of a sliding family
};

struct SiteInfo {
    Point p;
    Angle covered;
    bool complete = false;
    std::optional<Vec> gap_from;
    Turn gap;
};

class Tiler {
public:
    Tiler(const Protoset& ps, long budget) : pf_(ps), filler_(ps), budget_(budget) {}

    const Protoset& protoset() const { return pf_.protoset(); }
    const PlacementFactory& factory() const { return pf_; }
    std::vector<Placement>& placed() { return placed_; }
    long nodes() const { return nodes_; }
    void tick() {
        if (++nodes_ > budget_) throw BudgetExceeded("search budget exceeded (" + std::to_string(budget_) + " nodes)");
    }

    void set_region(const Polygon& r) {
        region_ = r;
        region_pieces_ = convexity(r) ? std::vector<Polygon>{r} : triangulate(r);
    }
    const std::optional<Polygon>& region() const { return region_; }

    std::vector<Sector> sectors_at(const Point& p) const {
        std::vector<Sector> out;
        auto add_polygon = [&](const Polygon& poly, bool exterior) {
            size_t n = poly.size();
            for (size_t j = 0; j < n; ++j) {
                const Point &a = poly[j], &b = poly[(j + 1) % n];
                if (a == p) {
                    Vec nx = poly[(j + 1) % n] - p, pv = poly[(j + n - 1) % n] - p;
                    if (exterior) out.push_back({pv, nx, Turn::between(pv, nx)});
                    else out.push_back({nx, pv, Turn::between(nx, pv)});
                } else if (!(b == p) && on_segment(p, a, b)) {
                    Vec f = b - a, r = a - b;
                    if (exterior) out.push_back({r, f, half_turn()});
                    else out.push_back({f, r, half_turn()});
                }
            }
        };
        for (auto& pl : placed_) {
            if (p.x.to_double() < pl.box.x0 - 1e-9 || p.x.to_double() > pl.box.x1 + 1e-9 ||
                p.y.to_double() < pl.box.y0 - 1e-9 || p.y.to_double() > pl.box.y1 + 1e-9)
                continue;
            add_polygon(pl.poly, false);
        }
        if (region_) add_polygon(*region_, true);
        return out;
    }

    SiteInfo site(const Point& p) const {
        SiteInfo s;
        s.p = p;
        auto secs = sectors_at(p);
        s.covered = Angle::of(Turn(1, 0));
        for (auto& x : secs) s.covered = s.covered + Angle::of(x.size);
        s.complete = s.covered.is_full();
        if (s.complete || secs.empty()) return s;
        // a sector end that no other sector starts from opens the gap
        for (auto& x : secs) {
            bool continued = false;
            for (auto& y : secs)
                if (same_angle(Turn(x.to.x, x.to.y), Turn(y.from.x, y.from.y))) continued = true;
            if (continued) continue;
            Turn start(x.to.x, x.to.y);
            std::optional<Turn> best;
            for (auto& y : secs) {
                Turn rel = Turn::between(x.to, y.from);
                if (rel.is_zero_angle()) continue;
                if (!best || cmp_arg(rel, *best) < 0) best = rel;
            }
            if (!s.gap_from || lex(Point{x.to.x, x.to.y}, *s.gap_from) < 0) {
                s.gap_from = x.to;
                s.gap = best ? *best : half_turn();
            }
            break;
        }
        return s;
    }

    // all placements filling the sector just after the gap ray at a site
    std::vector<Candidate> candidates(const SiteInfo& s) {
        std::vector<Candidate> out;
        std::set<std::string> seen;
        if (s.complete || !s.gap_from) return out;
        const Protoset& ps = pf_.protoset();
        Vec u = *s.gap_from;
        auto push = [&](size_t proto, const Isometry& g, bool slide) {
            Placement pl = pf_.make(proto, g);
            std::string k = placement_key(ps, pl) + (slide ? "~" : "");
            if (!seen.insert(k).second) return;
            if (!admissible(pl)) return;
            out.push_back({std::move(pl), slide});
        };
        auto rotation_onto = [&](const Vec& w) -> std::optional<Isometry> {
            auto l = sqrt_exact(norm2(w) * norm2(u));
            if (!l) return std::nullopt;
            Isometry g;
            g.c = dot(w, u) / *l;
            g.s = cross(w, u) / *l;
            return g;
        };
        Angle gap = Angle::of(s.gap);
        bool straight_room = cmp(Angle::of(half_turn()), gap) <= 0;
        for (size_t t = 0; t < ps.tiles.size(); ++t) {
            const Prototile& tile = ps.tiles[t];
            size_t n = tile.size();
            for (int r = 0; r <= (ps.reflections_allowed ? 1 : 0); ++r) {
                auto mirror = [&](Vec v) {
                    if (r) v.y = -v.y;
                    return v;
                };
                // corner at the site
                for (size_t j = 0; j < n; ++j) {
                    if (cmp(Angle::of(tile.corner(j)), gap) > 0) continue;
                    Vec w = r ? mirror(tile.vertex(j + n - 1) - tile.vertex(j)) : tile.vertex(j + 1) - tile.vertex(j);
                    auto rot = rotation_onto(w);
                    if (!rot) continue;
                    rot->reflected = r;
                    Point im = rot->apply(tile.vertex(j));
                    rot->tx = s.p.x - im.x;
                    rot->ty = s.p.y - im.y;
                    push(t, *rot, false);
                }
                if (!straight_room) continue;
                // site inside an edge: anchor an end at a vertex on the line, or record a slide
                for (size_t i = 0; i < n; ++i) {
                    Vec w = r ? mirror(tile.vertex(i) - tile.vertex(i + 1)) : tile.vertex(i + 1) - tile.vertex(i);
                    auto rot = rotation_onto(w);
                    if (!rot) continue;
                    rot->reflected = r;
                    Vec ww = rot->apply_vec(w);
                    Point local_start = r ? tile.vertex(i + 1) : tile.vertex(i);
                    auto place_start = [&](const Point& start) {
                        Isometry g = *rot;
                        Point im = g.apply(local_start);
                        g.tx = start.x - im.x;
                        g.ty = start.y - im.y;
                        return g;
                    };
                    for (auto& x : line_vertices(s.p, u)) {
                        // start at x behind the site, or end at x beyond it
                        for (int end = 0; end <= 1; ++end) {
                            Point start = end ? x - ww : x;
                            Point fin = start + ww;
                            if (start == s.p || fin == s.p || !on_segment(s.p, start, fin)) continue;
                            push(t, place_start(start), false);
                        }
                    }
                    if (tile.labels[i].is_plain() && ray_edge_plain(s.p, u))
                        push(t, place_start(s.p - ww * Scalar::frac(1, 2)), true);
                }
            }
        }
        return out;
    }

    // placement is inside the region, disjoint, legal contacts, and leaves fillable gaps
    bool admissible(const Placement& pl) {
        const Protoset& ps = pf_.protoset();
        if (region_) {
            for (auto& v : pl.poly)
                if (point_in_polygon(v, *region_) < 0) return false;
            for (auto& piece : pl.pieces) {
                Point c{0, 0};
                for (auto& v : piece) c = c + v;
                c = c * Scalar::frac(1, static_cast<long>(piece.size()));
                if (point_in_polygon(c, *region_) <= 0) return false;
            }
            size_t n = region_->size();
            for (auto& e : pl.edges)
                for (size_t k = 0; k < n; ++k)
                    if (segments_cross_properly(e.a, e.b, (*region_)[k], (*region_)[(k + 1) % n])) return false;
            Scalar total = pl.poly.empty() ? Scalar(0) : area2(pl.poly);
            for (auto& q : placed_) total += area2(q.poly);
            if (area2(*region_) < total) return false;
        }
        for (auto& q : placed_) {
            if (!bbox_overlap(pl.box, q.box, -1e-9)) continue;
            if (bbox_overlap(pl.box, q.box) && !interiors_disjoint(pl.pieces, q.pieces)) return false;
            for (auto& e : pl.edges)
                for (auto& f : q.edges)
                    if (!contact_ok(ps, pl, e, q, f)) return false;
        }
        placed_.push_back(pl);
        bool ok = true;
        try {
            std::vector<Point> pts = pl.poly;
            for (auto& q : placed_)
                for (auto& v : q.poly)
                    if (point_in_polygon(v, pl.poly) == 0) pts.push_back(v);
            for (auto& p : pts) {
                SiteInfo si = site(p);
                if (si.complete) continue;
                if (si.covered.winding > 0) {
                    ok = false;
                    break;
                }
                Turn rest(si.covered.residual.dot, -si.covered.residual.cross);
                if (!filler_.fillable(Angle::of(rest))) {
                    ok = false;
                    break;
                }
            }
        } catch (...) {
            placed_.pop_back();
            throw;
        }
        placed_.pop_back();
        return ok;
    }

    std::vector<Point> line_vertices(const Point& p, const Vec& u) const {
        std::vector<Point> out;
        auto consider = [&](const Point& v) {
            if (v == p || orient(p, p + u, v) != 0) return;
            for (auto& o : out)
                if (o == v) return;
            out.push_back(v);
        };
        for (auto& q : placed_)
            for (auto& v : q.poly) consider(v);
        if (region_)
            for (auto& v : *region_) consider(v);
        std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return lex(a, b) < 0; });
        return out;
    }

    // the tile edge bounding the gap ray is plain (or the region wall)
    bool ray_edge_plain(const Point& p, const Vec& u) const {
        const Protoset& ps = pf_.protoset();
        for (auto& q : placed_)
            for (auto& e : q.edges) {
                bool along = (e.b == p && orient(p, p + u, e.a) == 0 && dot(e.a - p, u).sign() > 0) ||
                             (e.a == p && orient(p, p + u, e.b) == 0 && dot(e.b - p, u).sign() > 0) ||
                             (on_segment(p, e.a, e.b) && !(p == e.a) && !(p == e.b) && orient(e.a, e.b, p + u) == 0);
                if (along && !ps.tiles[q.proto].labels[e.proto_edge].is_plain()) return false;
            }
        return true;
    }

private:
    PlacementFactory pf_;
    GapFiller filler_;
    long budget_;
    long nodes_ = 0;
    std::vector<Placement> placed_;
    std::optional<Polygon> region_;
    std::vector<Polygon> region_pieces_;
};

inline Patch to_patch(const Protoset& ps, const std::vector<Placement>& pl) {
    Patch p;
    for (auto& x : pl) p.tiles.push_back({ps.tiles[x.proto].name, x.pose});
    finalize(ps, p);
    return p;
}

// ---------------------------------------------------------------- surround

struct SurroundResult {
    ForcedStatus status = ForcedStatus::impossible;
    std::vector<Patch> coronas;  // seed first, canonical order
    std::vector<Patch> slides;   // completed coronas using a slid representative
    std::optional<Point> blocking_site;
    long nodes = 0;
};

inline SurroundResult surround(const Protoset& ps, const Patch& seed, int levels, long budget = 2'000'000) {
    if (levels < 1) throw std::invalid_argument("levels must be at least 1");
    auto issues = verify_patch(ps, seed);
    if (!issues.empty()) throw std::invalid_argument("seed patch: " + issues.front());
    Tiler tl(ps, budget);
    for (auto& t : seed.tiles) tl.placed().push_back(tl.factory().make(t));
    SurroundResult res;
    std::map<std::string, Patch> found, slid;

    auto sites_of = [&](size_t target) {
        std::vector<Point> pts;
        auto& pl = tl.placed();
        for (size_t i = 0; i < pl.size(); ++i)
            for (auto& v : pl[i].poly) {
                bool on_target = i < target;
                for (size_t k = 0; k < target && !on_target; ++k)
                    if (point_in_polygon(v, pl[k].poly) == 0) on_target = true;
                if (!on_target) continue;
                bool dup = false;
                for (auto& q : pts)
                    if (q == v) dup = true;
                if (!dup) pts.push_back(v);
            }
        std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return lex(a, b) < 0; });
        return pts;
    };

    auto rec = [&](auto&& self, size_t target, int level, int slid_count) -> void {
        tl.tick();
        std::optional<SiteInfo> pick;
        std::vector<Candidate> pick_c;
        for (auto& p : sites_of(target)) {
            SiteInfo si = tl.site(p);
            if (si.complete) continue;
            auto c = tl.candidates(si);
            if (!pick || c.size() < pick_c.size()) {
                pick = si;
                pick_c = std::move(c);
                if (pick_c.empty()) break;
            }
        }
        if (!pick) {
            if (level == levels) {
                Patch p = to_patch(ps, tl.placed());
                (slid_count ? slid : found).emplace(canonical_form(ps, p), p);
            } else {
                self(self, tl.placed().size(), level + 1, slid_count);
            }
            return;
        }
        if (pick_c.empty() && !res.blocking_site) res.blocking_site = pick->p;
        for (auto& c : pick_c) {
            tl.placed().push_back(c.placement);
            self(self, target, level, slid_count + (c.slide ? 1 : 0));
            tl.placed().pop_back();
        }
    };
    rec(rec, seed.tiles.size(), 1, 0);
    for (auto& [k, p] : found) res.coronas.push_back(p);
    for (auto& [k, p] : slid)
        if (!found.count(k)) res.slides.push_back(p);
    res.nodes = tl.nodes();
    if (res.coronas.empty() && res.slides.empty()) res.status = ForcedStatus::impossible;
    else if (res.coronas.size() == 1 && res.slides.empty()) res.status = ForcedStatus::unique;
    else res.status = ForcedStatus::multiple;
    if (res.status != ForcedStatus::impossible) res.blocking_site.reset();
    return res;
}

inline Patch single_tile(const Protoset& ps, const std::string& name) {
    Patch p;
    p.tiles.push_back({ps.tiles[ps.index_of(name)].name, Isometry::identity()});
    return p;
}

// ---------------------------------------------------------------- region tiling

inline std::vector<Isometry> polygon_symmetries(const Polygon& r) {
    std::vector<Isometry> out;
    size_t n = r.size();
    for (int refl = 0; refl <= 1; ++refl)
        for (size_t k = 0; k < n; ++k) {
            auto g = refl ? align(r[0], r[1], r[(k + 1) % n], r[k], true) : align(r[0], r[1], r[k], r[(k + 1) % n], false);
            if (!g) continue;
            Polygon img = transform(*g, r);
            bool ok = true;
            for (auto& v : img) {
                bool hit = false;
                for (auto& w : r)
                    if (v == w) hit = true;
                ok = ok && hit;
            }
            if (ok) out.push_back(*g);
        }
    return out;
}

struct RegionResult {
    std::vector<Patch> tilings;
    long nodes = 0;
};

inline RegionResult tile_region(const Protoset& ps, const Polygon& region, bool modulo_symmetry = false,
                                long budget = 2'000'000) {
    if (region.size() < 3 || !is_simple(region)) throw std::invalid_argument("region is not a simple polygon");
    Polygon reg = region;
    if (area2(reg).sign() < 0) std::reverse(reg.begin(), reg.end());
    Tiler tl(ps, budget);
    tl.set_region(reg);
    Scalar target = area2(reg);
    std::vector<Isometry> syms = modulo_symmetry ? polygon_symmetries(reg) : std::vector<Isometry>{Isometry::identity()};
    std::map<std::string, Patch> found;
    auto sites = [&]() {
        std::vector<Point> pts = reg;
        for (auto& q : tl.placed())
            for (auto& v : q.poly) {
                bool dup = false;
                for (auto& w : pts)
                    if (w == v) dup = true;
                if (!dup) pts.push_back(v);
            }
        std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return lex(a, b) < 0; });
        return pts;
    };
    auto rec = [&](auto&& self, Scalar covered) -> void {
        tl.tick();
        if (covered == target) {
            std::vector<Placement>& pl = tl.placed();
            std::string best;
            bool first = true;
            for (auto& g : syms) {
                std::string d = patch_description(ps, pl, g);
                if (first || d < best) {
                    best = d;
                    first = false;
                }
            }
            found.emplace(best, to_patch(ps, pl));
            return;
        }
        std::optional<SiteInfo> pick;
        std::vector<Candidate> pick_c;
        for (auto& p : sites()) {
            SiteInfo si = tl.site(p);
            if (si.complete) continue;
            auto c = tl.candidates(si);
            if (!pick || c.size() < pick_c.size()) {
                pick = si;
                pick_c = std::move(c);
                if (pick_c.empty()) break;
            }
        }
        if (!pick) return;
        for (auto& c : pick_c) {
            if (c.slide) continue;  // slides inside a bounded region end at anchored positions
            tl.placed().push_back(c.placement);
            self(self, covered + area2(c.placement.poly));
            tl.placed().pop_back();
        }
    };
    rec(rec, Scalar(0));
    RegionResult rr;
    for (auto& [k, p] : found) rr.tilings.push_back(p);
    rr.nodes = tl.nodes();
    return rr;
}

// ---------------------------------------------------------------- rows

enum class RowForcing { forced_translate, not_forced, continuum };

inline const char* forcing_name(RowForcing f) {
    return f == RowForcing::forced_translate ? "forced_translate" : (f == RowForcing::not_forced ? "not_forced" : "continuum");
}

struct RowCheck {
    RowForcing verdict = RowForcing::not_forced;
    std::vector<PlacedTile> survivors;
    std::optional<PlacedTile> slide;
};

// every prototile placed edge-to-edge on the given edge of a tile at rest
inline RowCheck translation_row_check(const Protoset& ps, const std::string& tile, size_t edge) {
    size_t ti = ps.index_of(tile);
    const Prototile& t = ps.tiles[ti];
    if (edge >= t.size()) throw std::out_of_range("no such edge");
    PlacementFactory pf(ps);
    Placement base = pf.make(ti, Isometry::identity());
    const WorldEdge& e = base.edges[edge];
    RowCheck rc;
    auto fits = [&](const Placement& pl) {
        if (bbox_overlap(pl.box, base.box) && !interiors_disjoint(pl.pieces, base.pieces)) return false;
        for (auto& f : pl.edges)
            for (auto& g : base.edges)
                if (!contact_ok(ps, pl, f, base, g)) return false;
        return true;
    };
    for (size_t k = 0; k < ps.tiles.size(); ++k) {
        const Prototile& o = ps.tiles[k];
        for (int r = 0; r <= (ps.reflections_allowed ? 1 : 0); ++r)
            for (size_t f = 0; f < o.size(); ++f) {
                // the placed partner edge runs e.b -> e.a
                auto g = r ? align(o.vertex(f + 1), o.vertex(f), e.b, e.a, true) : align(o.vertex(f), o.vertex(f + 1), e.b, e.a, false);
                if (!g) continue;
                Placement pl = pf.make(k, *g);
                bool shares = false;
                for (auto& we : pl.edges)
                    if (we.proto_edge == f && we.a == e.b && we.b == e.a) shares = true;
                if (!shares || !edges_compatible(ps, {o.name, *g}, f, {t.name, Isometry::identity()}, edge)) continue;
                if (fits(pl)) rc.survivors.push_back({o.name, *g});
            }
    }
    // plain contacts: a half-shifted partner along the same line
    if (t.labels[edge].is_plain()) {
        Vec d = e.b - e.a;
        for (size_t k = 0; k < ps.tiles.size() && !rc.slide; ++k) {
            const Prototile& o = ps.tiles[k];
            for (int r = 0; r <= (ps.reflections_allowed ? 1 : 0) && !rc.slide; ++r)
                for (size_t f = 0; f < o.size() && !rc.slide; ++f) {
                    if (!o.labels[f].is_plain()) continue;
                    Vec w = r ? o.vertex(f) - o.vertex(f + 1) : o.vertex(f + 1) - o.vertex(f);
                    if (r) w.y = -w.y;
                    Vec target = -d;
                    auto l = sqrt_exact(norm2(w) * norm2(target));
                    if (!l) continue;
                    Isometry g;
                    g.c = dot(w, target) / *l;
                    g.s = cross(w, target) / *l;
                    g.reflected = r;
                    Point start_local = r ? o.vertex(f + 1) : o.vertex(f);
                    // shift by half of the shorter edge from the aligned end
                    Vec ww = g.apply_vec(w);
                    Scalar lw = norm2(ww), ld = norm2(d);
                    Vec half = (lw < ld ? ww : target) * Scalar::frac(1, 2);
                    Point start = e.b + half;
                    Point im = g.apply(start_local);
                    g.tx = start.x - im.x;
                    g.ty = start.y - im.y;
                    Placement pl = pf.make(k, g);
                    if (fits(pl)) rc.slide = PlacedTile{o.name, g};
                }
        }
    }
    if (rc.slide) rc.verdict = RowForcing::continuum;
    else if (rc.survivors.size() == 1 && rc.survivors[0].prototile == t.name && !rc.survivors[0].pose.reflected &&
             rc.survivors[0].pose.c == Scalar(1) && rc.survivors[0].pose.s.is_zero())
        rc.verdict = RowForcing::forced_translate;
    else rc.verdict = RowForcing::not_forced;
    return rc;
}

// ---------------------------------------------------------------- recomposition

// same vertex cycle up to rotation
inline bool same_outline(const Polygon& a, const Polygon& b) {
    size_t n = a.size();
    if (n != b.size()) return false;
    for (size_t k = 0; k < n; ++k) {
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) ok = a[i] == b[(i + k) % n];
        if (ok) return true;
    }
    return false;
}

struct Recomposition {
    bool ok = false;
    Patch original;
    std::vector<std::string> problems;
};

inline Recomposition check_recomposition(const Protoset& derived, const Patch& patch, const Protoset& original) {
    Recomposition rc;
    // occurrences: original tile -> (piece, pose piece->original)
    std::map<std::string, std::vector<std::pair<std::string, Isometry>>> occ;
    if (derived.convexify.is_object() && derived.convexify.contains("occurrences")) {
        for (auto& [tn, list] : derived.convexify["occurrences"].items())
            for (size_t i = 0; i < list.size(); ++i)
                occ[tn].push_back({list[i].at("piece").get<std::string>(),
                                   isometry_from_json(list[i].at("pose"), "convexify.occurrences." + tn)});
    } else {
        for (auto& t : derived.tiles) occ[t.name].push_back({t.name, Isometry::identity()});
    }
    for (auto& t : patch.tiles)
        if (t.pose.reflected && !derived.reflections_allowed) rc.problems.push_back("reflected piece");
    PlacementFactory pf(derived);
    std::vector<Placement> pl;
    for (auto& t : patch.tiles) pl.push_back(pf.make(t));
    std::vector<std::string> keys;
    for (auto& p : pl) keys.push_back(placement_key(derived, p));
    std::vector<int> owner(pl.size(), -1);
    struct Rebuilt {
        std::string tile;
        Isometry pose;
        std::vector<size_t> members;
    };
    std::vector<Rebuilt> rebuilt;
    for (size_t i = 0; i < pl.size(); ++i) {
        if (owner[i] >= 0) continue;
        const std::string& pname = patch.tiles[i].prototile;
        bool claimed = false;
        for (auto& [tn, list] : occ) {
            for (auto& [piece, h] : list) {
                if (piece != pname) continue;
                Isometry G = pl[i].pose.compose(h.inverse());
                std::vector<size_t> members;
                bool complete = true;
                for (auto& [piece2, h2] : list) {
                    Placement want = pf.make(derived.index_of(piece2), G.compose(h2));
                    size_t hit = pl.size();
                    for (size_t j = 0; j < pl.size(); ++j)
                        if (owner[j] < 0 && patch.tiles[j].prototile == piece2 && same_outline(pl[j].poly, want.poly)) hit = j;
                    if (hit == pl.size() || std::find(members.begin(), members.end(), hit) != members.end()) {
                        complete = false;
                        break;
                    }
                    members.push_back(hit);
                }
                if (!complete) continue;
                for (size_t m : members) owner[m] = static_cast<int>(rebuilt.size());
                rebuilt.push_back({tn, G, members});
                claimed = true;
                break;
            }
            if (claimed) break;
        }
        if (!claimed) rc.problems.push_back("piece " + std::to_string(i) + " (" + pname + ") belongs to no complete original tile");
    }
    struct WorldMark {
        Point a, b;
        bool placed = false;
    };
    std::vector<WorldMark> marks;
    for (size_t m = 0; m < pl.size(); ++m)
        for (auto& mk : derived.tiles[pl[m].proto].marks) marks.push_back({patch.tiles[m].pose.apply(mk.a), patch.tiles[m].pose.apply(mk.b)});
    for (auto& rb : rebuilt) {
        if (!original.find(rb.tile)) {
            rc.problems.push_back("original protoset has no tile " + rb.tile);
            continue;
        }
        rc.original.tiles.push_back({rb.tile, rb.pose});
        const Prototile& ot = original.tiles[original.index_of(rb.tile)];
        for (size_t e = 0; e < ot.size(); ++e) {
            Point a = rb.pose.apply(ot.vertex(e)), b = rb.pose.apply(ot.vertex(e + 1));
            Vec d = b - a;
            Scalar l = norm2(d);
            std::vector<std::pair<Scalar, Scalar>> cover;
            for (auto& mk : marks) {
                if (orient(a, b, mk.a) != 0 || orient(a, b, mk.b) != 0) continue;
                Scalar tp = dot(mk.a - a, d) / l, tq = dot(mk.b - a, d) / l;
                Scalar lo = std::min(tp, tq), hi = std::max(tp, tq);
                if (!(lo < Scalar(1)) || !(Scalar(0) < hi)) continue;
                if (!(Scalar(0) > lo) && !(hi > Scalar(1))) mk.placed = true;
                cover.push_back({lo, hi});
            }
            std::sort(cover.begin(), cover.end(), [](auto& x, auto& y) { return x.first < y.first; });
            // gaps in the cover are allowed only outside the patch (a nick waiting for its bump)
            std::vector<std::pair<Scalar, Scalar>> gaps;
            Scalar reach = 0;
            for (auto& [lo, hi] : cover) {
                if (reach < lo) gaps.push_back({reach, std::min(lo, Scalar(1))});
                reach = std::max(reach, hi);
                if (!(reach < Scalar(1))) break;
            }
            if (reach < Scalar(1)) gaps.push_back({reach, Scalar(1)});
            for (auto& [lo, hi] : gaps) {
                Point mid = a + d * ((lo + hi) * Scalar::frac(1, 2));
                bool inside = false;
                for (auto& x : pl)
                    if (point_in_polygon(mid, x.poly) > 0) inside = true;
                if (inside) rc.problems.push_back("marks do not cover edge " + std::to_string(e) + " of " + rb.tile);
            }
        }
    }
    for (auto& mk : marks)
        if (!mk.placed) {
            rc.problems.push_back("a mark lies on no edge of the recomposed tiles");
            break;
        }
    if (rc.problems.empty()) {
        finalize(original, rc.original);
        auto v = verify_patch(original, rc.original);
        rc.problems.insert(rc.problems.end(), v.begin(), v.end());
    }
    rc.ok = rc.problems.empty() && !patch.tiles.empty();
    return rc;
}

}  // namespace sigma
