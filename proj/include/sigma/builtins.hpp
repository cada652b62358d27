#pragma once

#include "subdivide.hpp"

namespace sigma::builtin {

inline Scalar q(long n, long d = 1) { return Scalar::frac(n, d); }
inline Scalar r3(long n, long d = 1) { return Scalar(0, mpq_class(n, d)); }

inline Prototile make_tile(std::string name, std::string color, Polygon pts, std::vector<std::string> labels) {
    Prototile t;
    t.name = std::move(name);
    t.color = std::move(color);
    t.boundary = std::move(pts);
    for (auto& l : labels) {
        if (l == "plain") {
            t.labels.push_back(EdgeLabel::plain());
            continue;
        }
        auto k = l.find(':');
        std::string key = l.substr(k + 1);
        t.labels.push_back(l[0] == 'b' ? EdgeLabel::bump(key) : EdgeLabel::nick(key));
    }
    return t;
}

// two-tile digitization: a regular hexagon and a kinked translation octagon,
// every edge keyed to its antiparallel partner
inline Protoset schmitt_fig4() {
    Protoset ps;
    ps.name = "schmitt_fig4";
    ps.reflections_allowed = true;
    Polygon hex = {{1, 0}, {q(1, 2), r3(1, 2)}, {q(-1, 2), r3(1, 2)}, {-1, 0}, {q(-1, 2), r3(-1, 2)}, {q(1, 2), r3(-1, 2)}};
    ps.tiles.push_back(make_tile("red", "#c8374a", hex,
                                 {"bump:h0", "nick:h4", "bump:h2", "nick:h0", "bump:h4", "nick:h2"}));
    Scalar k = q(7, 100);
    Point zp{1, 0}, kk{q(9, 20), -k}, wp{0, 0}, w{0, -1};
    Point x{q(1, 2), Scalar(-1, mpq_class(-1, 2))};
    Point kp = kk + x;
    Point y{q(3, 2), Scalar(-1, mpq_class(-1, 2))};
    Point zpp{q(3, 2), r3(-1, 2)};
    ps.tiles.push_back(make_tile("purple", "#7b4fa0", {zp, kk, wp, w, x, kp, y, zpp},
                                 {"bump:a", "bump:b", "nick:d2", "bump:d3", "nick:b", "nick:a", "bump:d2", "nick:d3"}));
    ps.notes =
        "Reconstructed digitization. The source gives no coordinates; the hexagon and the kinked octagon are free "
        "choices that keep the combinatorics used by the convex construction (a hexagon split about its centre, "
        "and a tile carrying the points W', Z', W, Z'' with W'Z' and W'W of unit length at a right angle).";
    return ps;
}

// three row tiles: purple strip, green transition, centrally symmetric red
inline Protoset sigma3_fig5() {
    Protoset ps;
    ps.name = "sigma3_fig5";
    ps.reflections_allowed = true;
    ps.tiles.push_back(make_tile("P", "#8e5bb5",
                                 {{0, 0}, {3, 0}, {q(13, 4), q(1, 2)}, {3, 1}, {0, 1}, {q(1, 4), q(1, 2)}},
                                 {"nick:u", "bump:pl", "plain", "bump:u", "plain", "nick:pl"}));
    ps.tiles.push_back(make_tile("G", "#4f9a5a", {{0, 0}, {1, q(1, 4)}, {2, q(-1, 4)}, {3, 0}, {3, 1}, {0, 1}},
                                 {"nick:z", "plain", "bump:z", "bump:gl", "bump:u", "nick:gl"}));
    ps.tiles.push_back(make_tile("R", "#a3343c",
                                 {{0, 0}, {1, q(1, 4)}, {2, q(-1, 4)}, {3, 0}, {q(13, 4), q(1, 2)}, {q(11, 4), q(3, 2)},
                                  {3, 2}, {2, q(7, 4)}, {1, q(9, 4)}, {0, 2}, {q(-1, 4), q(3, 2)}, {q(1, 4), q(1, 2)}},
                                 {"nick:z", "plain", "bump:z", "nick:rl", "plain", "bump:rm", "nick:z", "plain", "bump:z",
                                  "nick:rm", "plain", "bump:rl"}));
    ps.notes =
        "Reconstructed digitization with symbolic bumps and nicks. P stacks on P, G sits under P, R stacks on R, "
        "and G rotated a half turn closes a block of R rows; outlines are free choices.";
    ps.rows = json::parse(R"({
      "types": [
        {"id": "P_up", "tile": "P", "pose": "identity", "top": [3], "bottom": [0], "lateral": [1, 2, 4, 5]},
        {"id": "G_up", "tile": "G", "pose": "identity", "top": [4], "bottom": [0, 1, 2], "lateral": [3, 5]},
        {"id": "R", "tile": "R", "pose": "identity", "top": [6, 7, 8], "bottom": [0, 1, 2], "lateral": [3, 4, 5, 9, 10, 11]},
        {"id": "G_down", "tile": "G", "pose": "half_turn", "top": [0, 1, 2], "bottom": [4], "lateral": [3, 5]},
        {"id": "P_down", "tile": "P", "pose": "half_turn", "top": [0], "bottom": [3], "lateral": [1, 2, 4, 5]}
      ],
      "involution": {"P_up": "P_down", "P_down": "P_up", "G_up": "G_down", "G_down": "G_up", "R": "R"}
    })");
    return ps;
}

inline WedgeSpec default_wedge() { return WedgeSpec{Turn(5, 2), q(1, 4)}; }

// chords and piece labels for the hexagon/octagon construction
inline SubdivisionPlan fig7_plan(const Point& Q, const Point& R) {
    SubdivisionPlan p;
    TilePlan h;
    h.points["C"] = {0, 0};
    h.chords = {{"C", "w1"}, {"C", "w3"}, {"C", "w5"}};
    h.piece_names["t1"] = {"C", "w1"};
    p.tiles["red"] = h;
    TilePlan o;
    o.points["Q"] = Q;
    o.points["R"] = R;
    o.chords = {{"v1", "Q"}, {"Q", "w4"}, {"w2", "w4"}, {"Q", "R"}, {"R", "w5"}, {"R", "w7"}};
    o.piece_names["t4"] = {"v1", "w1"};
    o.piece_names["t8"] = {"v3", "w3"};
    o.piece_names["t5"] = {"v5", "w5"};
    o.piece_names["t7"] = {"v6", "w6"};
    o.piece_names["t6"] = {"v0", "w0"};
    p.tiles["purple"] = o;
    p.named = {{"A", "red:v1"},    {"B", "red:v2"},     {"C", "red:C"},      {"P", "red:w1"},
               {"W'", "purple:v2"}, {"Z'", "purple:v0"}, {"W", "purple:v3"},  {"Z''", "purple:v7"},
               {"Z", "purple:w7"},  {"Q", "purple:Q"},   {"R", "purple:R"},   {"S", "purple:v1"},
               {"T", "purple:w4"},  {"U", "purple:w5"},  {"V", "purple:w7"}};
    p.c2_exempt = {"t1"};
    p.identity_sites = {"red:w1", "red:w3", "red:w5", "purple:w2", "purple:w4", "purple:w5", "purple:w7"};
    return p;
}

inline SubdivisionPlan fig7_plan() { return fig7_plan({q(29, 40), q(-17, 40)}, {q(15, 16), q(-12, 25)}); }

inline SubdivisionPlan fig8_plan() {
    SubdivisionPlan p;
    TilePlan tp;
    tp.points["X"] = {q(19, 8), q(3, 8)};
    tp.chords = {{"X", "w0"}, {"X", "v2"}, {"v5", "v2"}, {"X", "w5"}};
    tp.piece_names = {{"p1", {"v1", "w1"}}, {"p2", {"v3", "w3"}}, {"p3", {"v5", "w5"}}, {"p4", {"v0", "w0"}}};
    p.tiles["P"] = tp;
    TilePlan tg;
    tg.points["X"] = {q(3, 8), q(3, 8)};
    tg.chords = {{"v1", "v3"}, {"X", "w4"}, {"X", "w0"}, {"X", "w5"}};
    tg.piece_names = {{"g1", {"v2", "w2"}}, {"g2", {"v3", "w3"}}, {"g3", {"w4", "v5"}}, {"g4", {"v0", "w0"}}};
    p.tiles["G"] = tg;
    TilePlan tr;
    tr.points["O"] = {q(3, 2), 1};
    tr.chords = {{"O", "w0"}, {"O", "v5"}, {"O", "w6"}, {"O", "v11"}, {"v1", "w3"}, {"v7", "w9"}};
    tr.piece_names = {{"r1", {"v1", "v2"}}, {"r2", {"w3", "v4"}}, {"r3", {"v5", "w5"}}};
    p.tiles["R"] = tr;
    return p;
}

}  // namespace sigma::builtin
