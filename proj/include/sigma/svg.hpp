#pragma once

#include "patch.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

namespace sigma {

struct SvgOptions {
    double scale = 60;  // pixels per unit
    double margin = 0.5;
    double stroke_width = 1.2;
    int places = 9;
    bool show_labels = true;
    bool show_marks = true;
    std::map<std::string, std::string> fill;  // per prototile, overrides the tile colour
};

namespace detail {

inline std::string num(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s == "-0" ? "0" : s;
}

}  // namespace detail

// one path per tile, label ticks, and the marks as an overlay group
inline std::string render_svg(const Protoset& ps, const Patch& patch, const SvgOptions& opt = {}) {
    if (!(opt.scale > 0)) throw std::invalid_argument("scale must be positive");
    PlacementFactory pf(ps);
    std::vector<Placement> pl;
    for (auto& t : patch.tiles) pl.push_back(pf.make(t));
    double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
    for (size_t i = 0; i < pl.size(); ++i) {
        const BBox& b = pl[i].box;
        x0 = i ? std::min(x0, b.x0) : b.x0;
        y0 = i ? std::min(y0, b.y0) : b.y0;
        x1 = i ? std::max(x1, b.x1) : b.x1;
        y1 = i ? std::max(y1, b.y1) : b.y1;
    }
    x0 -= opt.margin, y0 -= opt.margin, x1 += opt.margin, y1 += opt.margin;
    double s = opt.scale;
    // plane y points up, svg y points down
    auto X = [&](double x) { return detail::num((x - x0) * s, opt.places); };
    auto Y = [&](double y) { return detail::num((y1 - y) * s, opt.places); };
    auto P = [&](const Point& p) { return X(p.x.to_double()) + " " + Y(p.y.to_double()); };
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::num((x1 - x0) * s, 3)
      << "\" height=\"" << detail::num((y1 - y0) * s, 3) << "\">\n";
    o << "<g id=\"tiles\" stroke=\"#222\" stroke-width=\"" << detail::num(opt.stroke_width, 3) << "\">\n";
    for (size_t i = 0; i < pl.size(); ++i) {
        const Prototile& t = ps.tiles[pl[i].proto];
        auto f = opt.fill.find(t.name);
        o << "<path id=\"tile" << i << "\" class=\"" << t.name << "\" fill=\"" << (f == opt.fill.end() ? t.color : f->second)
          << "\" fill-opacity=\"0.75\" d=\"";
        for (size_t k = 0; k < pl[i].poly.size(); ++k) o << (k ? " L " : "M ") << P(pl[i].poly[k]);
        o << " Z\"/>\n";
    }
    o << "</g>\n";
    if (opt.show_labels) {
        o << "<g id=\"labels\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\">\n";
        for (size_t i = 0; i < pl.size(); ++i) {
            const Prototile& t = ps.tiles[pl[i].proto];
            for (auto& e : pl[i].edges) {
                const EdgeLabel& l = t.labels[e.proto_edge];
                if (l.is_plain()) continue;
                double ax = e.a.x.to_double(), ay = e.a.y.to_double(), bx = e.b.x.to_double(), by = e.b.y.to_double();
                double mx = (ax + bx) / 2, my = (ay + by) / 2, dx = bx - ax, dy = by - ay;
                double len = std::hypot(dx, dy), h = 0.12 * std::min(len, 1.0);
                // outward normal of a ccw edge is (dy, -dx); bumps point out, nicks in
                double sg = l.kind == EdgeKind::bump ? 1 : -1, nx = dy / len, ny = -dx / len;
                double ux = dx / len * h, uy = dy / len * h;
                o << "<path d=\"M " << X(mx - ux) << " " << Y(my - uy) << " L " << X(mx + sg * nx * h) << " "
                  << Y(my + sg * ny * h) << " L " << X(mx + ux) << " " << Y(my + uy) << "\"/>\n";
            }
        }
        o << "</g>\n";
    }
    if (opt.show_marks) {
        o << "<g id=\"marks\" stroke=\"#d0202a\" stroke-width=\"2.5\" fill=\"none\">\n";
        for (size_t i = 0; i < pl.size(); ++i)
            for (auto& m : ps.tiles[pl[i].proto].marks)
                o << "<path d=\"M " << P(pl[i].pose.apply(m.a)) << " L " << P(pl[i].pose.apply(m.b)) << "\"/>\n";
        o << "</g>\n";
    }
    o << "</svg>\n";
    return o.str();
}

// every prototile once, laid out left to right
inline Patch protoset_gallery(const Protoset& ps) {
    Patch p;
    Scalar x = 0;
    for (auto& t : ps.tiles) {
        BBox b = bbox(t.boundary);
        // shift by a rational close to the float extent
        mpq_class lx(static_cast<long>(std::floor(b.x0 * 8)), 8), wx(static_cast<long>(std::ceil((b.x1 - b.x0) * 8)) + 4, 8);
        p.tiles.push_back({t.name, Isometry::translation({x - Scalar(lx), 0})});
        x = x + Scalar(wx);
    }
    return p;
}

}  // namespace sigma
