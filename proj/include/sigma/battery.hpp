#pragma once

#include "atlas.hpp"
#include "convexify.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace sigma {

struct CheckResult {
    std::string id;
    bool pass = true;
    std::vector<std::string> offending;
    json witnesses = json::array();
};

struct BatteryReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const CheckResult& at(const std::string& id) const {
        for (auto& c : checks)
            if (c.id == id) return c;
        throw std::out_of_range("no check " + id);
    }
    json to_json() const {
        json j = json::array();
        for (auto& c : checks) j.push_back({{"id", c.id}, {"pass", c.pass}, {"offending", c.offending}, {"witnesses", c.witnesses}});
        return j;
    }
};

// ---------------------------------------------------------------- wz

struct WzReport {
    bool pass = false;
    bool i = false, ii = false, iii = false, iv = false, angle75 = false;
    Scalar zw2, z1z3_2, wz2, rival2;
    Point z3;
    std::string detail;
    json to_json() const {
        return {{"pass", pass}, {"Z'W>Z'Z'''", i}, {"angle_Z'Z'''W_135", ii}, {"W_outside_Z'Z''Z'''", iii},
                {"WZ_longest", iv}, {"angle_W'Z'''W_75", angle75}, {"|Z'W|^2", scalar_to_json(zw2)},
                {"|Z'Z'''|^2", scalar_to_json(z1z3_2)}, {"|WZ|^2", scalar_to_json(wz2)}, {"max_rival^2", scalar_to_json(rival2)}};
    }
};

struct RelationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// points: W', Z', W, Z'', Z and optionally A, B, C, P for the rival lengths
inline WzReport wz_check(const std::map<std::string, Point>& pts) {
    auto get = [&](const char* k) -> const Point& {
        auto it = pts.find(k);
        if (it == pts.end()) throw RelationError(std::string("missing point ") + k);
        return it->second;
    };
    const Point &w1 = get("W'"), &z1 = get("Z'"), &w = get("W"), &z2 = get("Z''"), &z = get("Z");
    Isometry cw90 = Isometry::rotation_about(w1, 0, -1);
    Isometry cw60 = Isometry::rotation_about(w1, Scalar::frac(1, 2), Scalar(0, mpq_class(-1, 2)));
    if (!(cw90.apply(z1) == w)) throw RelationError("W is not Z' turned a quarter clockwise about W'");
    WzReport r;
    r.z3 = cw60.apply(z1);
    if (!(z2 == r.z3 + (z1 - w1)))
        throw RelationError("Z'' is not Z''' shifted by W'Z'");
    r.zw2 = norm2(w - z1);
    r.z1z3_2 = norm2(r.z3 - z1);
    r.i = r.z1z3_2 < r.zw2;
    Vec u = z1 - r.z3, v = w - r.z3;
    Scalar d = dot(u, v), c = cross(u, v);
    r.ii = d.sign() < 0 && (c == -d || c == d);
    Vec u2 = w1 - r.z3;
    Scalar d2 = dot(u2, v);
    r.angle75 = d2.sign() > 0 && d2 * d2 * Scalar(4) == Scalar(2, mpq_class(-1)) * norm2(u2) * norm2(v);
    r.iii = point_in_polygon(w, {z1, z2, r.z3}) < 0 && point_in_polygon(w, {z1, r.z3, z2}) < 0;
    r.wz2 = norm2(z - w);
    r.rival2 = std::max(norm2(z - z1), norm2(z - z2));
    if (pts.count("P")) {
        const Point& p = get("P");
        for (const char* k : {"A", "B", "C"})
            if (pts.count(k)) r.rival2 = std::max(r.rival2, norm2(get(k) - p));
    }
    r.iv = r.rival2 < r.wz2 && r.z1z3_2 < r.wz2;
    r.pass = r.i && r.ii && r.iii && r.iv && r.angle75;
    return r;
}

inline std::map<std::string, Point> named_points(const ConvexBuild& cb) {
    std::map<std::string, Point> m;
    for (auto& [k, v] : cb.named) m[k] = v.second;
    return m;
}

// ---------------------------------------------------------------- battery

struct BatteryParams {
    Turn alpha;
    std::vector<Turn> beta_gamma;
    std::map<std::string, std::vector<bool>> inner;  // chord edges per prototile
    std::vector<std::string> c2_exempt;
    std::vector<std::vector<Turn>> whitelist;  // multisets allowed to hit a C3 target
    std::map<std::string, Point> named;        // for C5
    long budget = 5'000'000;
};

// apex angle of a bump on any edge
inline Turn bump_apex_angle(const WedgeSpec& w) {
    Point a{0, 0}, b{1, 0};
    Point p = bump_apex(a, b, w);
    return Turn::between(b - p, a - p);
}

inline Turn nick_split(const Polygon& poly, const Point& apex) {
    for (size_t j = 0; j < poly.size(); ++j)
        if (poly[j] == apex) return corner_turn(poly, j);
    throw std::invalid_argument("apex is not a corner of the piece");
}

inline BatteryParams battery_params(const ConvexBuild& cb, const Protoset& base, const SubdivisionPlan& plan,
                                    const WedgeSpec& w, const std::string& beta_tile) {
    BatteryParams bp;
    bp.alpha = bump_apex_angle(w);
    bp.inner = cb.inner;
    bp.c2_exempt = plan.c2_exempt;
    bp.named = named_points(cb);
    auto corners_at = [&](const std::string& tile, const Point& pt) {
        std::vector<Turn> out;
        for (auto& o : cb.occurrences.at(tile)) {
            const Prototile& pc = cb.derived.tiles[cb.derived.index_of(o.piece)];
            Polygon placed = transform(o.pose, pc.boundary);
            for (auto& p : placed)
                if (p == pt) out.push_back(nick_split(placed, pt));
        }
        return out;
    };
    for (auto& site : plan.identity_sites) {
        auto k = site.find(':');
        if (k == std::string::npos) throw std::invalid_argument("identity site needs tile:ref");
        std::string tn = site.substr(0, k);
        Point pt = resolve_ref(cb.wedged.at(tn), plan.tiles.at(tn), site.substr(k + 1));
        auto w = corners_at(tn, pt);
        w.push_back(bp.alpha);
        bp.whitelist.push_back(w);
    }
    const Prototile& t = base.tiles[base.index_of(beta_tile)];
    const WedgedTile& wt = cb.wedged.at(beta_tile);
    for (size_t e = 0; e < t.size() && bp.beta_gamma.empty(); ++e) {
        if (t.labels[e].kind != EdgeKind::nick) continue;
        const Point& apex = wt.tile.boundary[static_cast<size_t>(wt.apex_pos[e])];
        bp.beta_gamma = corners_at(beta_tile, apex);
    }
    return bp;
}

namespace detail {

struct AngleSet {
    std::vector<Turn> turns;
    std::vector<double> deg;
    int add(const Turn& t) {
        double d = t.degrees();
        for (size_t k = 0; k < turns.size(); ++k)
            if (std::abs(deg[k] - d) < 1e-6 && same_angle(turns[k], t)) return static_cast<int>(k);
        turns.push_back(t);
        deg.push_back(d);
        return static_cast<int>(turns.size() - 1);
    }
    int find(const Turn& t) const {
        for (size_t k = 0; k < turns.size(); ++k)
            if (same_angle(turns[k], t)) return static_cast<int>(k);
        return -1;
    }
};

inline Angle sum_of(const AngleSet& as, const std::vector<int>& ids) {
    Angle s = Angle::of(Turn(1, 0));
    for (int i : ids) s = s + Angle::of(as.turns[i]);
    return s;
}

inline std::string describe(const AngleSet& as, const std::vector<int>& ids) {
    std::ostringstream o;
    o.precision(6);
    o << "{";
    for (size_t i = 0; i < ids.size(); ++i) o << (i ? " + " : "") << as.deg[ids[i]];
    o << "}";
    return o.str();
}

inline json witness(const AngleSet& as, const std::vector<int>& ids) {
    json a = json::array();
    for (int i : ids) a.push_back({scalar_to_json(as.turns[i].dot), scalar_to_json(as.turns[i].cross)});
    return a;
}

// visit every multiset of angle classes with approximate sum at most `limit`
template <class F>
void visit_multisets(const AngleSet& as, double limit, long budget, F&& fn) {
    std::vector<int> cur;
    long nodes = 0;
    auto rec = [&](auto&& self, size_t from, double acc) -> void {
        if (++nodes > budget) throw BudgetExceeded("battery budget exceeded");
        if (!cur.empty()) fn(acc, cur);
        for (size_t a = from; a < as.turns.size(); ++a) {
            if (acc + as.deg[a] > limit + 1e-6) continue;
            cur.push_back(static_cast<int>(a));
            self(self, a, acc + as.deg[a]);
            cur.pop_back();
        }
    };
    rec(rec, 0, 0.0);
}

}  // namespace detail

inline BatteryReport constraint_battery(const Protoset& ps, const BatteryParams& bp) {
    using namespace detail;
    BatteryReport rep;
    AngleSet as;
    for (auto& t : ps.tiles)
        for (size_t j = 0; j < t.size(); ++j) as.add(t.corner(j));
    int a_id = as.add(bp.alpha);
    std::vector<int> bg;
    for (auto& t : bp.beta_gamma) bg.push_back(as.add(t));

    auto same_multiset = [](std::vector<int> a, std::vector<int> b) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    };

    CheckResult c2;
    c2.id = "C2";
    for (auto& t : ps.tiles) {
        if (std::find(bp.c2_exempt.begin(), bp.c2_exempt.end(), t.name) != bp.c2_exempt.end()) continue;
        auto it = bp.inner.find(t.name);
        if (it == bp.inner.end()) continue;
        const auto& f = it->second;
        size_t n = t.size();
        for (size_t i = 0; i < n && n > 1; ++i) {
            size_t k = (i + 1) % n;
            if (f[i] && f[k] && t.edge_len2(i) == t.edge_len2(k)) {
                c2.pass = false;
                c2.offending.push_back(t.name + ": edges " + std::to_string(i) + "," + std::to_string(k));
                c2.witnesses.push_back(scalar_to_json(t.edge_len2(i)));
            }
        }
    }

    std::vector<std::vector<int>> white;
    for (auto& w : bp.whitelist) {
        std::vector<int> v;
        for (auto& t : w) v.push_back(as.find(t));
        white.push_back(v);
    }
    auto whitelisted = [&](const std::vector<int>& ids) {
        for (auto& w : white)
            if (same_multiset(w, ids)) return true;
        return false;
    };
    std::vector<std::pair<double, int>> by_deg;
    for (size_t k = 0; k < as.turns.size(); ++k) by_deg.push_back({as.deg[k], static_cast<int>(k)});
    std::sort(by_deg.begin(), by_deg.end());
    auto near = [&](double v, auto&& fn) {
        auto it = std::lower_bound(by_deg.begin(), by_deg.end(), std::make_pair(v - 1e-6, -1));
        for (; it != by_deg.end() && it->first <= v + 1e-6; ++it) fn(it->second);
    };
    std::vector<int> abc = {a_id};
    abc.insert(abc.end(), bg.begin(), bg.end());

    CheckResult c1, c3, c4;
    c1.id = "C1", c3.id = "C3", c4.id = "C4";
    auto fail = [&](CheckResult& c, std::string what, const std::vector<int>& ids) {
        c.pass = false;
        c.offending.push_back(std::move(what));
        c.witnesses.push_back(witness(as, ids));
    };
    visit_multisets(as, 360.0, bp.budget, [&](double d, const std::vector<int>& ids) {
        bool single = ids.size() == 1;
        // C1: alpha is no other sum
        if (!(single && ids[0] == a_id) && std::abs(d - as.deg[a_id]) < 1e-6 && sum_of(as, ids) == Angle::of(bp.alpha))
            fail(c1, describe(as, ids), ids);
        // C3: no sum equals an inner angle or its supplement
        if (d < 180.0 + 1e-6) {
            near(d, [&](int t) {
                if ((single && ids[0] == t) || t == a_id) return;  // sums onto alpha belong to C1
                if (sum_of(as, ids) == Angle::of(as.turns[t]) && !whitelisted(ids))
                    fail(c3, describe(as, ids) + " = " + describe(as, {t}), ids);
            });
            near(180.0 - d, [&](int t) {
                auto with_t = ids;
                with_t.push_back(t);
                if (sum_of(as, with_t).is_half() && !whitelisted(with_t))
                    fail(c3, describe(as, ids) + " = 180 - " + describe(as, {t}), with_t);
            });
        }
        // C4: a full turn through alpha, beta or gamma is one of the designed ones
        if (std::abs(d - 360.0) < 1e-6) {
            bool touches = false;
            for (int i : ids)
                if (std::find(abc.begin(), abc.end(), i) != abc.end()) touches = true;
            if (touches && !same_multiset(ids, abc) && !whitelisted(ids) && sum_of(as, ids).is_full())
                fail(c4, describe(as, ids), ids);
        }
    });
    if (bg.size() >= 2 && !sum_of(as, abc).is_full()) {
        c4.pass = false;
        c4.offending.push_back("alpha + beta + gamma is not a full turn");
    }
    rep.checks.push_back(c1);
    rep.checks.push_back(c2);
    rep.checks.push_back(c3);
    rep.checks.push_back(c4);

    CheckResult c5;
    c5.id = "C5";
    try {
        WzReport wz = wz_check(bp.named);
        c5.pass = wz.pass;
        c5.witnesses.push_back(wz.to_json());
        if (!wz.pass) c5.offending.push_back("wz chain fails");
    } catch (const RelationError& e) {
        c5.pass = false;
        c5.offending.push_back(e.what());
    }
    rep.checks.push_back(c5);
    return rep;
}

}  // namespace sigma
