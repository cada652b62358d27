#include <doctest.h>

#include "atlas_oracle.hpp"

#include <map>
#include <set>

using namespace testing;

namespace {

std::multiset<long> angle_multiset(const Protoset& ps, const VertexFigure& f) {
    std::multiset<long> m;
    for (auto& c : f.fan) m.insert(std::lround(ps.find(c.tile)->corner(c.corner).degrees()));
    return m;
}

}  // namespace

TEST_CASE("atlas of the unit square") {
    Protoset ps = builtin::unit_square();
    auto figs = vertex_atlas(ps);
    std::set<std::pair<int, std::multiset<long>>> shapes;
    for (auto& f : figs) shapes.insert({f.total == FigureTotal::full ? 0 : 1, angle_multiset(ps, f)});
    CHECK(shapes == std::set<std::pair<int, std::multiset<long>>>{{0, {90, 90, 90, 90}}, {1, {90, 90}}});
    for (auto& f : figs) {
        VertexFigure back = figure_from_json(figure_to_json(f));
        CHECK(back.fan == f.fan);
        CHECK(back.key == f.key);
    }
    auto r = forced_corner(Atlas(ps), "square", 0);
    CHECK(r.status == ForcedStatus::multiple);
}

TEST_CASE("atlas of a pentagon with no vertex figure") {
    CHECK(vertex_atlas(generic_pentagon()).empty());
    CHECK(forced_corner(Atlas(generic_pentagon()), "pent", 2).status == ForcedStatus::impossible);
}

TEST_CASE("atlas agrees with the brute-force oracle") {
    std::vector<Protoset> sets = {builtin::unit_square(), builtin::domino(), builtin::fig3_rows(), generic_pentagon(),
                                  notched_square(), corpus("sigma3_fig5"), corpus("schmitt_fig4")};
    for (auto& ps : sets) {
        INFO(ps.name);
        REQUIRE(ps.tiles.size() <= 4);
        auto got = atlas_keys(ps), want = Oracle(ps).run();
        for (auto& k : got)
            if (!want.count(k)) MESSAGE("atlas only: " << k);
        for (auto& k : want)
            if (!got.count(k)) MESSAGE("oracle only: " << k);
        CHECK(got == want);
    }
}

TEST_CASE("atlas is unchanged by moving a prototile") {
    std::mt19937_64 g(11);
    Protoset ps = corpus("sigma3_fig5");
    auto base = atlas_keys(ps);
    for (int i = 0; i < 3; ++i) {
        Protoset moved = ps;
        Isometry h = random_iso(g, false);
        for (auto& t : moved.tiles) t.boundary = transform(h, t.boundary);
        CHECK(atlas_keys(moved) == base);
    }
}

TEST_CASE("atlas budget") {
    AtlasOptions o;
    o.budget = 10;
    CHECK_THROWS_AS(vertex_atlas(builtin::convex_fig7(), o), BudgetExceeded);
}

TEST_CASE("forced corners of the convex instance") {
    ConvexInstance ci = convex_fig7_instance();
    Atlas atlas(ci.build.derived);
    ForcingSummary fs = verify_forcing(ci, atlas);
    CHECK(fs.all_unique());
    CHECK(fs.q_triple_distinct);
    // the beta corner closes only against alpha and gamma
    bool abg = false;
    for (auto& f : atlas.figures())
        if (f.fan.size() == 3 && f.total == FigureTotal::full) abg = true;
    CHECK(abg);
}
