#pragma once

#include "scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sigma {

struct Point {
    Scalar x, y;
    Point() = default;
    Point(Scalar x_, Scalar y_) : x(std::move(x_)), y(std::move(y_)) {}
    friend bool operator==(const Point&, const Point&) = default;
    Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
    Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
    Point operator-() const { return {-x, -y}; }
    Point operator*(const Scalar& k) const { return {x * k, y * k}; }
};
using Vec = Point;
using Polygon = std::vector<Point>;

inline Scalar dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y; }
inline Scalar cross(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }
inline Scalar norm2(const Vec& a) { return dot(a, a); }
inline Vec perp(const Vec& a) { return {-a.y, a.x}; }  // ccw quarter turn
inline int orient(const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a).sign(); }

// lexicographic point order for canonical sorting
inline int lex(const Point& a, const Point& b) {
    int c = Scalar::lex(a.x, b.x);
    return c ? c : Scalar::lex(a.y, b.y);
}

// ---------------------------------------------------------------- turns

// angle held as the argument of (dot, cross)
struct Turn {
    Scalar dot, cross;
    Turn() : dot(1), cross(0) {}
    Turn(Scalar d, Scalar c) : dot(std::move(d)), cross(std::move(c)) {
        if (dot.is_zero() && cross.is_zero()) throw std::invalid_argument("zero direction pair");
    }
    // angle swept ccw from u to v
    static Turn between(const Vec& u, const Vec& v) { return Turn(sigma::dot(u, v), sigma::cross(u, v)); }

    // upper half: argument in [0, 180)
    bool upper() const { return cross.sign() > 0 || (cross.sign() == 0 && dot.sign() > 0); }
    bool is_zero_angle() const { return cross.sign() == 0 && dot.sign() > 0; }
    double degrees() const {
        double d = std::atan2(cross.to_double(), dot.to_double()) * 180.0 / std::numbers::pi;
        return d < 0 ? d + 360.0 : d;
    }
};

enum class TurnClass { zero, ccw, cw, straight };

inline TurnClass classify(const Turn& t) {
    int c = t.cross.sign();
    if (c > 0) return TurnClass::ccw;
    if (c < 0) return TurnClass::cw;
    return t.dot.sign() > 0 ? TurnClass::zero : TurnClass::straight;
}

inline Turn operator+(const Turn& u, const Turn& v) {
    return Turn(u.dot * v.dot - u.cross * v.cross, u.dot * v.cross + u.cross * v.dot);
}
inline Turn operator-(const Turn& u) { return Turn(u.dot, -u.cross); }

// same angle modulo 360
inline bool same_angle(const Turn& u, const Turn& v) {
    Vec a{u.dot, u.cross}, b{v.dot, v.cross};
    return cross(a, b).is_zero() && dot(a, b).sign() > 0;
}

// compare arguments in [0, 360)
inline int cmp_arg(const Turn& u, const Turn& v) {
    bool hu = u.upper(), hv = v.upper();
    if (hu != hv) return hu ? -1 : 1;
    int c = cross(Vec{u.dot, u.cross}, Vec{v.dot, v.cross}).sign();
    return c > 0 ? -1 : (c < 0 ? 1 : 0);
}

// angle with winding: total = 360*winding + arg(residual)
struct Angle {
    long winding = 0;
    Turn residual;
    double approx = 0;  // degrees, for pruning only

    static Angle of(const Turn& t) { return Angle{0, t, t.degrees()}; }

    friend Angle operator+(const Angle& a, const Angle& b) {
        Angle r;
        r.residual = a.residual + b.residual;
        r.approx = a.approx + b.approx;
        r.winding = a.winding + b.winding;
        double s = a.residual.degrees() + b.residual.degrees();
        bool carry;
        if (s < 360.0 - 1e-7)
            carry = false;
        else if (s > 360.0 + 1e-7)
            carry = true;
        else  // exact tie-break: carry iff arg(a+b) < arg(a) with b nonzero
            carry = !b.residual.is_zero_angle() && cmp_arg(r.residual, a.residual) < 0;
        if (carry) ++r.winding;
        return r;
    }
    friend int cmp(const Angle& a, const Angle& b) {
        if (a.winding != b.winding) return a.winding < b.winding ? -1 : 1;
        return cmp_arg(a.residual, b.residual);
    }
    friend bool operator==(const Angle& a, const Angle& b) { return cmp(a, b) == 0; }
    bool is_full() const { return winding == 1 && residual.is_zero_angle(); }
    bool is_half() const { return winding == 0 && classify(residual) == TurnClass::straight; }
};

inline Turn quarter_turn() { return Turn(0, 1); }
inline Turn half_turn() { return Turn(-1, 0); }

// ---------------------------------------------------------------- isometries

struct Isometry {
    Scalar c = 1, s = 0;
    Scalar tx = 0, ty = 0;
    bool reflected = false;

    static Isometry identity() { return {}; }
    static Isometry translation(const Vec& v) { return {1, 0, v.x, v.y, false}; }
    static Isometry rotation(Scalar c, Scalar s) {
        Isometry g{std::move(c), std::move(s), 0, 0, false};
        g.check();
        return g;
    }
    // rotation about a centre
    static Isometry rotation_about(const Point& o, Scalar c, Scalar s) {
        Isometry r = rotation(c, s);
        Point im = r.apply(o);
        r.tx = o.x - im.x;
        r.ty = o.y - im.y;
        return r;
    }
    static Isometry mirror_x() { return {1, 0, 0, 0, true}; }

    void check() const {
        if (!(c * c + s * s == Scalar(1))) throw std::invalid_argument("rotation not unit");
    }

    Point apply(const Point& p) const {
        Scalar py = reflected ? -p.y : p.y;
        return {c * p.x - s * py + tx, s * p.x + c * py + ty};
    }
    Vec apply_vec(const Vec& v) const {
        Scalar vy = reflected ? -v.y : v.y;
        return {c * v.x - s * vy, s * v.x + c * vy};
    }
    // (*this) after h
    Isometry compose(const Isometry& h) const {
        // linear part L = R(c,s) F^a ; R F = F R^-1
        Isometry g;
        Scalar hs = reflected ? -h.s : h.s;
        g.c = c * h.c - s * hs;
        g.s = s * h.c + c * hs;
        g.reflected = reflected != h.reflected;
        Point t = apply(Point{h.tx, h.ty});
        g.tx = t.x;
        g.ty = t.y;
        return g;
    }
    Isometry inverse() const {
        Isometry g;
        if (reflected) {
            // (R F)^-1 = F R^-1 = R F
            g.c = c;
            g.s = s;
            g.reflected = true;
        } else {
            g.c = c;
            g.s = -s;
        }
        Point t = g.apply_vec(Point{tx, ty});
        g.tx = -t.x;
        g.ty = -t.y;
        return g;
    }
    friend bool operator==(const Isometry&, const Isometry&) = default;
};

// ---------------------------------------------------------------- polygons

inline Scalar area2(const Polygon& p) {
    Scalar a = 0;
    for (size_t i = 0, n = p.size(); i < n; ++i) a += cross(p[i], p[(i + 1) % n]);
    return a;
}

inline Turn corner_turn(const Polygon& p, size_t j) {
    size_t n = p.size();
    const Point& v = p[j];
    return Turn::between(p[(j + 1) % n] - v, p[(j + n - 1) % n] - v);
}

// closed segment intersection
inline bool on_segment(const Point& p, const Point& a, const Point& b) {
    if (orient(a, b, p) != 0) return false;
    return dot(p - a, p - b).sign() <= 0;
}
inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d);
}
inline bool segments_cross_properly(const Point& a, const Point& b, const Point& c, const Point& d) {
    return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

inline bool is_simple(const Polygon& p) {
    size_t n = p.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (p[i] == p[j]) return false;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            bool adj = j == i + 1 || (i == 0 && j == n - 1);
            const Point &a = p[i], &b = p[(i + 1) % n], &c = p[j], &d = p[(j + 1) % n];
            if (!adj) {
                if (segments_intersect(a, b, c, d)) return false;
            } else if (n > 3) {
                // adjacent edges may only share their common vertex
                const Point& shared = (j == i + 1) ? b : a;
                const Point& far1 = (j == i + 1) ? a : b;
                const Point& far2 = (j == i + 1) ? d : c;
                if (orient(far1, shared, far2) == 0 && dot(far1 - shared, far2 - shared).sign() > 0) return false;
            }
        }
    return true;
}

inline bool has_collinear_triple(const Polygon& p) {
    for (size_t j = 0; j < p.size(); ++j)
        if (corner_turn(p, j).cross.is_zero()) return true;
    return false;
}

// strict convexity of a ccw polygon; degenerate vertices are an input error
inline bool convexity(const Polygon& p) {
    if (p.size() < 3) throw std::invalid_argument("fewer than 3 vertices");
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] == p[j]) throw std::invalid_argument("repeated vertex");
    if (has_collinear_triple(p)) throw std::invalid_argument("collinear consecutive triple");
    size_t n = p.size();
    for (size_t i = 0; i < n; ++i)
        if (orient(p[i], p[(i + 1) % n], p[(i + 2) % n]) <= 0) return false;
    return true;
}

// -1 outside, 0 on boundary, 1 inside
inline int point_in_polygon(const Point& q, const Polygon& p) {
    size_t n = p.size();
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        const Point &a = p[i], &b = p[(i + 1) % n];
        if (on_segment(q, a, b)) return 0;
        bool ya = a.y > q.y, yb = b.y > q.y;
        if (ya != yb) {
            // x-coordinate of crossing compared with q.x, sign-adjusted
            int o = orient(a, b, q);
            if ((o > 0) == (b.y > a.y)) inside = !inside;
        }
    }
    return inside ? 1 : -1;
}

// ear clipping on a simple ccw polygon
inline std::vector<Polygon> triangulate(const Polygon& poly) {
    std::vector<Polygon> out;
    std::vector<Point> p = poly;
    while (p.size() > 3) {
        size_t n = p.size();
        bool clipped = false;
        for (size_t i = 0; i < n && !clipped; ++i) {
            const Point &a = p[(i + n - 1) % n], &b = p[i], &c = p[(i + 1) % n];
            if (orient(a, b, c) <= 0) continue;
            bool ear = true;
            for (size_t k = 0; k < n && ear; ++k) {
                if (k == i || k == (i + 1) % n || k == (i + n - 1) % n) continue;
                const Point& q = p[k];
                if (orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0) ear = false;
            }
            if (!ear) continue;
            out.push_back({a, b, c});
            p.erase(p.begin() + static_cast<long>(i));
            clipped = true;
        }
        if (!clipped) {
            // collinear leftovers: drop a straight vertex
            for (size_t i = 0; i < n; ++i)
                if (orient(p[(i + n - 1) % n], p[i], p[(i + 1) % n]) == 0) {
                    p.erase(p.begin() + static_cast<long>(i));
                    clipped = true;
                    break;
                }
            if (!clipped) throw std::runtime_error("triangulation failed");
        }
    }
    if (orient(p[0], p[1], p[2]) > 0) out.push_back(p);
    return out;
}

// separating-axis test on convex ccw polygons; touching counts as disjoint
inline bool convex_interiors_disjoint(const Polygon& a, const Polygon& b) {
    auto separates = [](const Polygon& e, const Polygon& o) {
        for (size_t i = 0; i < e.size(); ++i) {
            const Point &p = e[i], &q = e[(i + 1) % e.size()];
            bool all = true;
            for (const Point& r : o)
                if (orient(p, q, r) > 0) { all = false; break; }
            if (all) return true;
        }
        return false;
    };
    return separates(a, b) || separates(b, a);
}

struct BBox {
    double x0, y0, x1, y1;
};
inline BBox bbox(const Polygon& p) {
    BBox b{1e300, 1e300, -1e300, -1e300};
    for (auto& q : p) {
        double x = q.x.to_double(), y = q.y.to_double();
        b.x0 = std::min(b.x0, x);
        b.y0 = std::min(b.y0, y);
        b.x1 = std::max(b.x1, x);
        b.y1 = std::max(b.y1, y);
    }
    return b;
}
inline bool bbox_overlap(const BBox& a, const BBox& b, double eps = 1e-9) {
    return a.x0 < b.x1 - eps && b.x0 < a.x1 - eps && a.y0 < b.y1 - eps && b.y0 < a.y1 - eps;
}

// exact interior-disjointness of two simple polygons given their convex pieces
inline bool interiors_disjoint(const std::vector<Polygon>& pa, const std::vector<Polygon>& pb) {
    for (auto& x : pa)
        for (auto& y : pb) {
            if (!bbox_overlap(bbox(x), bbox(y))) continue;
            if (!convex_interiors_disjoint(x, y)) return false;
        }
    return true;
}

inline Polygon transform(const Isometry& g, const Polygon& p) {
    Polygon out;
    out.reserve(p.size());
    for (auto& q : p) out.push_back(g.apply(q));
    if (g.reflected) std::reverse(out.begin(), out.end());
    return out;
}

// isometry taking segment (a0,a1) onto (b0,b1); lengths must agree
inline std::optional<Isometry> align(const Point& a0, const Point& a1, const Point& b0, const Point& b1, bool reflect) {
    Vec u = a1 - a0, v = b1 - b0;
    Scalar l = norm2(u);
    if (!(l == norm2(v)) || l.is_zero()) return std::nullopt;
    if (reflect) u.y = -u.y;
    Isometry g;
    g.c = dot(u, v) / l;
    g.s = cross(u, v) / l;
    g.reflected = reflect;
    Point im = g.apply(a0);
    g.tx = b0.x - im.x;
    g.ty = b0.y - im.y;
    return g;
}

// witness isometry mapping polygon a onto polygon b as point sets;
// candidates come from matching the cyclic (edge length, corner) sequences
inline std::optional<Isometry> congruent(const Polygon& a, const Polygon& b, bool allow_reflection) {
    size_t n = a.size();
    if (n != b.size() || n < 3) return std::nullopt;
    std::vector<Scalar> la(n), lb(n);
    for (size_t k = 0; k < n; ++k) {
        la[k] = norm2(a[(k + 1) % n] - a[k]);
        lb[k] = norm2(b[(k + 1) % n] - b[k]);
    }
    for (int refl = 0; refl <= (allow_reflection ? 1 : 0); ++refl) {
        for (size_t j = 0; j < n; ++j) {
            // a[k] -> b[j+k], or b[j-k] when reflected
            auto idx = [&](size_t k) { return refl ? (j + n - k % n) % n : (j + k) % n; };
            bool ok = true;
            for (size_t k = 0; k < n && ok; ++k) {
                size_t e = refl ? idx(k + 1) : idx(k);
                if (!(la[k] == lb[e])) ok = false;
            }
            if (!ok) continue;
            auto g = align(a[0], a[1], b[idx(0)], b[idx(1)], refl);
            if (!g) continue;
            bool all = true;
            for (size_t k = 0; k < n && all; ++k)
                if (!(g->apply(a[k]) == b[idx(k)])) all = false;
            if (all) return g;
        }
    }
    return std::nullopt;
}

}  // namespace sigma
