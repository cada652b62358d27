#include <doctest.h>

#include "support.hpp"

#include <fstream>
#include <sstream>

using namespace testing;

namespace {

Prototile square_tile(std::vector<EdgeLabel> labels) {
    Prototile t;
    t.name = "sq";
    t.boundary = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    t.labels = std::move(labels);
    return t;
}

bool has(const std::vector<std::string>& v, const std::string& needle) {
    for (auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("prototile validation") {
    CHECK(validate_prototile(square_tile(std::vector<EdgeLabel>(4))).empty());

    Prototile bow = square_tile(std::vector<EdgeLabel>(4));
    bow.boundary = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK(has(validate_prototile(bow), "not simple"));

    CHECK(has(validate_prototile(square_tile(std::vector<EdgeLabel>(3))), "label count mismatch"));

    Prototile cw = square_tile(std::vector<EdgeLabel>(4));
    std::reverse(cw.boundary.begin(), cw.boundary.end());
    CHECK(has(validate_prototile(cw), "counter-clockwise"));

    Prototile col = square_tile(std::vector<EdgeLabel>(5));
    col.boundary.insert(col.boundary.begin() + 1, Point{q(1, 2), 0});
    CHECK(has(validate_prototile(col), "collinear"));

    Prototile m = square_tile(std::vector<EdgeLabel>(4));
    m.marks.push_back({{q(1, 2), q(1, 2)}, {2, 2}});
    CHECK(has(validate_prototile(m), "outside"));
    m.marks[0].b = {1, 1};  // closed region includes the boundary
    CHECK(validate_prototile(m).empty());
}

TEST_CASE("edge compatibility") {
    Protoset ps;
    ps.name = "bn";
    ps.reflections_allowed = true;
    ps.tiles.push_back(builtin::make_tile("a", "#000", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {"bump:k", "plain", "nick:k", "plain"}));
    ps.tiles.push_back(builtin::make_tile("b", "#000", {{0, 0}, {2, 0}, {2, 1}, {0, 1}}, {"plain", "plain", "plain", "plain"}));
    PlacedTile lo{"a", Isometry::identity()}, up{"a", Isometry::translation({0, 1})};
    // lo's top (nick) meets up's bottom (bump)
    CHECK(edges_compatible(ps, lo, 2, up, 0));
    CHECK(edges_compatible(ps, up, 0, lo, 2));
    // bump against bump: place a half-turned copy below
    PlacedTile down{"a", Isometry::rotation_about({q(1, 2), 0}, -1, 0)};
    CHECK(placed_edge(*ps.find("a"), down.pose, 0).a == Point{1, 0});
    CHECK_FALSE(edges_compatible(ps, lo, 0, down, 0));
    // plain edges of different length never coincide
    // b's long edge starts where lo's right edge ends
    PlacedTile wide{"b", Isometry::translation({1, 1}).compose(Isometry::rotation(0, -1))};
    CHECK(placed_edge(*ps.find("b"), wide.pose, 0).a == Point{1, 1});
    CHECK_FALSE(edges_compatible(ps, lo, 1, wide, 0));
    // flipped bump needs a flipped nick
    PlacedTile flip{"a", Isometry::translation({0, 2}).compose(Isometry::mirror_x())};
    CHECK(placed_edge(*ps.find("a"), flip.pose, 2).a == Point{0, 1});
    CHECK_FALSE(edges_compatible(ps, lo, 2, flip, 2));

    std::mt19937_64 g(7);
    for (int i = 0; i < 50; ++i) {
        Isometry h = random_iso(g);
        PlacedTile l2{"a", h.compose(lo.pose)}, u2{"a", h.compose(up.pose)};
        CHECK(edges_compatible(ps, l2, 2, u2, 0) == edges_compatible(ps, lo, 2, up, 0));
        CHECK(edges_compatible(ps, u2, 0, l2, 2) == edges_compatible(ps, l2, 2, u2, 0));
    }
}

TEST_CASE("json round trip and parse errors") {
    for (auto& n : all_builtins()) {
        Protoset ps = builtin::by_name(n);
        Protoset back = parse_protoset(dump_protoset(ps));
        CHECK(dump_protoset(back) == dump_protoset(ps));
        REQUIRE(back.tiles.size() == ps.tiles.size());
        for (size_t i = 0; i < ps.tiles.size(); ++i) {
            CHECK(back.tiles[i].boundary == ps.tiles[i].boundary);
            CHECK(back.tiles[i].labels == ps.tiles[i].labels);
            CHECK(back.tiles[i].marks == ps.tiles[i].marks);
        }
    }
    const std::string tile = R"({"name":"t","boundary":[[0,0],[1,0],[0,1]],"labels":["plain","plain","plain"]})";
    CHECK_NOTHROW(parse_protoset(R"({"name":"x","tiles":[)" + tile + "]}"));
    CHECK_THROWS_AS(parse_protoset(R"({"name":"x","tiles":[{"name":"t","boundary":[[{"r":"1/0"},0],[1,0],[0,1]],"labels":["plain","plain","plain"]}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_protoset(R"({"name":"x","tiles":[{"name":"t","boundary":[[{"r":[1,0]},0],[1,0],[0,1]],"labels":["plain","plain","plain"]}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_protoset(R"({"name":"x","tiles":[)" + tile + "," + tile + "]}"), ParseError);
    CHECK_THROWS_AS(parse_protoset("{"), ParseError);
    CHECK_THROWS_AS(parse_protoset(R"({"name":"x","tiles":[],"extra":1})"), ParseError);
    CHECK_THROWS_AS(parse_protoset(R"({"name":"x","tiles":[{"name":"t","boundary":[[0,0],[1,0],[0,1]],"labels":["bump","plain","plain"]}]})"),
                    ParseError);
    // scalars: integer, "p/q", and the object form agree
    Protoset a = parse_protoset(R"({"name":"x","tiles":[{"name":"t","boundary":[["1/2",0],[{"r":[2,1],"s3":[0,1]},0],[0,{"s3":[1,2]}]],"labels":["plain","plain","plain"]}]})");
    CHECK(a.tiles[0].boundary[0].x == q(1, 2));
    CHECK(a.tiles[0].boundary[1].x == Scalar(2));
    CHECK(a.tiles[0].boundary[2].y == r3(1, 2));
}

TEST_CASE("builtin census and validation") {
    for (auto& n : all_builtins()) {
        INFO(n);
        CHECK(validate_protoset(builtin::by_name(n)).empty());
    }
    CHECK(census(builtin::convex_fig7()) == std::map<size_t, int>{{5, 2}, {6, 4}});
    CHECK(census(builtin::convex_fig8()) == std::map<size_t, int>{{4, 5}, {5, 4}, {6, 1}, {7, 1}});
    CHECK(builtin::sigma3_fig5().tiles.size() == 3);
    for (auto n : {"convex_fig7", "convex_fig8"})
        for (auto& t : builtin::by_name(n).tiles) CHECK(convexity(t.boundary));

    Protoset twin = builtin::unit_square();
    twin.tiles.push_back(twin.tiles[0]);
    twin.tiles[1].name = "other";
    twin.tiles[1].boundary = transform(Isometry::translation({5, 5}), twin.tiles[1].boundary);
    CHECK(has(validate_protoset(twin), "congruent"));
    twin.tiles[1].labels[0] = EdgeLabel::bump("x");
    CHECK(validate_protoset(twin).empty());
}

TEST_CASE("corpus files load and validate") {
    for (auto n : {"pentagon", "notched_square", "sigma3_fig5", "fig3_rows"}) {
        std::ifstream f(std::string(SIGMA_CORPUS) + "/" + n + ".json");
        REQUIRE_MESSAGE(f.good(), n);
        std::stringstream ss;
        ss << f.rdbuf();
        Protoset ps = parse_protoset(ss.str());
        CHECK(validate_protoset(ps).empty());
    }
}
