#include <doctest.h>

#include "support.hpp"

using namespace testing;

namespace {

Patch pieces_of(const ConvexInstance& ci, const std::string& orig, const Isometry& g) {
    Patch p;
    for (auto& o : ci.build.occurrences.at(orig)) p.tiles.push_back({o.piece, g.compose(o.pose)});
    return p;
}

Patch moved(const Patch& p, const Isometry& g) {
    Patch r;
    for (auto& t : p.tiles) r.tiles.push_back({t.prototile, g.compose(t.pose)});
    return r;
}

Polygon rect(long w, long h) { return {{0, 0}, {w, 0}, {w, h}, {0, h}}; }

const ConvexInstance& fig7() {
    static ConvexInstance ci = convex_fig7_instance();
    return ci;
}

}  // namespace

TEST_CASE("patch json round trip") {
    std::mt19937_64 g(3);
    Patch p;
    for (int i = 0; i < 5; ++i) p.tiles.push_back({"square", random_iso(g)});
    Patch back = patch_from_json(patch_to_json(p));
    REQUIRE(back.tiles.size() == 5);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(back.tiles[i].prototile == "square");
        CHECK(back.tiles[i].pose == p.tiles[i].pose);
    }
    CHECK_THROWS(patch_from_json(json::parse(R"([{"prototile":"a","pose":{"c":2,"s":0,"tx":0,"ty":0,"reflected":false}}])")));
}

TEST_CASE("verify_patch catches overlaps and bad contacts") {
    Protoset sq = builtin::unit_square();
    Patch ok;
    ok.tiles = {{"square", Isometry::identity()}, {"square", Isometry::translation({1, 0})}};
    CHECK(verify_patch(sq, ok).empty());
    Patch bad = ok;
    bad.tiles[1].pose = Isometry::translation({q(1, 2), 0});
    CHECK_FALSE(verify_patch(sq, bad).empty());

    Protoset s3 = builtin::sigma3_fig5();
    Patch clash;
    // two purple tiles stacked: top bump:u meets the bottom nick:u, fine
    clash.tiles = {{"P", Isometry::identity()}, {"P", Isometry::translation({0, 1})}};
    CHECK(verify_patch(s3, clash).empty());
    // mirrored about y = 1, the upper tile shows its own bump:u to the lower one
    clash.tiles[1].pose = Isometry{1, 0, 0, 2, true};
    CHECK_FALSE(verify_patch(s3, clash).empty());
}

TEST_CASE("surround of simple protosets") {
    auto sq = builtin::unit_square();
    auto r = surround(sq, single_tile(sq, "square"), 1);
    CHECK(r.status == ForcedStatus::multiple);
    REQUIRE(r.coronas.size() == 1);
    CHECK(r.coronas[0].tiles.size() == 9);
    CHECK(r.slides.size() == 4);
    for (auto& c : r.coronas) CHECK(verify_patch(sq, c).empty());
    for (auto& c : r.slides) CHECK(verify_patch(sq, c).empty());

    auto pent = generic_pentagon();
    auto rp = surround(pent, single_tile(pent, "pent"), 1);
    CHECK(rp.status == ForcedStatus::impossible);
    CHECK(rp.blocking_site.has_value());

    auto notch = notched_square();
    CHECK(surround(notch, single_tile(notch, "notch"), 1).status == ForcedStatus::impossible);

    CHECK_THROWS_AS(surround(sq, single_tile(sq, "square"), 1, 3), BudgetExceeded);
    CHECK_THROWS(surround(sq, single_tile(sq, "square"), 0));
}

TEST_CASE("surround of the convex instance") {
    const Protoset& d = fig7().build.derived;
    Atlas atlas(d);
    for (auto& t : d.tiles) {
        INFO(t.name);
        auto r = surround(d, single_tile(d, t.name), 1);
        CHECK(r.status == ForcedStatus::unique);
        REQUIRE(r.coronas.size() == 1);
        const Patch& c = r.coronas[0];
        CHECK(verify_patch(d, c).empty());
        // every uniquely forced seed corner shows its forced fan in the corona
        PlacementFactory pf(d);
        for (size_t j = 0; j < t.size(); ++j) {
            auto fr = forced_corner(atlas, t.name, j);
            if (fr.status != ForcedStatus::unique || fr.witnesses[0].total != FigureTotal::full) continue;
            // the forced class may hold several figures that agree on local geometry
            std::multiset<std::string> got;
            for (auto& pt : c.tiles) {
                Placement p = pf.make(pt);
                for (auto& v : p.poly)
                    if (v == t.vertex(j)) got.insert(pt.prototile);
            }
            bool seen = false;
            for (auto& f : fr.alternatives[0]) {
                std::multiset<std::string> want;
                for (auto& fc : f.fan) want.insert(fc.tile);
                seen = seen || want == got;
            }
            CHECK_MESSAGE(seen, "corner " << j);
        }
    }
}

TEST_CASE("surround is invariant under moving the seed") {
    const Protoset& d = fig7().build.derived;
    std::mt19937_64 g(5);
    auto base = surround(d, single_tile(d, "t5"), 1);
    REQUIRE(base.coronas.size() == 1);
    CHECK(base.coronas[0].tiles.size() == 7);
    for (int i = 0; i < 2; ++i) {
        Patch seed;
        seed.tiles = {{"t5", random_iso(g)}};
        auto r = surround(d, seed, 1);
        REQUIRE(r.coronas.size() == 1);
        CHECK(patches_congruent(d, r.coronas[0], base.coronas[0]));
    }
}

TEST_CASE("region tilings") {
    auto sq = builtin::unit_square();
    auto dm = builtin::domino();
    CHECK(tile_region(sq, rect(2, 2)).tilings.size() == 1);
    CHECK(tile_region(dm, rect(2, 2)).tilings.size() == 2);
    CHECK(tile_region(dm, rect(2, 2), true).tilings.size() == 1);
    CHECK(tile_region(dm, rect(3, 3)).tilings.empty());
    CHECK(tile_region(dm, rect(4, 2)).tilings.size() == 5);
    auto r44 = tile_region(dm, rect(4, 4));
    CHECK(r44.tilings.size() == 36);
    for (auto& t : r44.tilings) {
        CHECK(t.tiles.size() == 8);
        CHECK(verify_patch(dm, t).empty());
    }
    std::mt19937_64 g(9);
    for (int i = 0; i < 3; ++i) {
        Isometry h = random_iso(g);
        CHECK(tile_region(dm, transform(h, rect(4, 2))).tilings.size() == 5);
    }
    CHECK_THROWS(tile_region(dm, {{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
}

TEST_CASE("patch congruence") {
    auto dm = builtin::domino();
    Patch h, v;
    h.tiles = {{"domino", Isometry::identity()}, {"domino", Isometry::translation({0, 1})}};
    Isometry rq = Isometry::rotation_about({1, 1}, 0, 1);
    v.tiles = {{"domino", rq}, {"domino", rq.compose(Isometry::translation({0, 1}))}};
    CHECK(patches_congruent(dm, h, v));
    std::mt19937_64 g(4);
    for (int i = 0; i < 10; ++i) CHECK(patches_congruent(dm, h, moved(h, random_iso(g))));
    Patch one;
    one.tiles = {h.tiles[0]};
    CHECK_FALSE(patches_congruent(dm, h, one));
    Patch side;
    side.tiles = {{"domino", Isometry::identity()}, {"domino", Isometry::translation({2, 0})}};
    CHECK_FALSE(patches_congruent(dm, h, side));
    CHECK(canonical_form(dm, h) == canonical_form(dm, v));
}

TEST_CASE("translation row check") {
    auto s3 = builtin::sigma3_fig5();
    for (auto& d : row_decls_from_json(s3.rows))
        for (size_t e : d.lateral) {
            const Prototile& t = *s3.find(d.tile);
            if (t.labels[e].is_plain()) continue;
            INFO(t.name << " edge " << e);
            auto rc = translation_row_check(s3, t.name, e);
            CHECK(rc.verdict == RowForcing::forced_translate);
            for (auto& s : rc.survivors) CHECK_FALSE(s.pose.reflected);
        }
    CHECK(translation_row_check(s3, "P", 3).verdict == RowForcing::forced_translate);
    // the bottom nick of P also takes a half-turned transition tile
    CHECK(translation_row_check(s3, "P", 0).verdict == RowForcing::not_forced);
    auto sq = builtin::unit_square();
    for (size_t e = 0; e < 4; ++e) CHECK(translation_row_check(sq, "square", e).verdict == RowForcing::continuum);
    auto sc = builtin::schmitt_fig4();
    for (auto& t : sc.tiles)
        for (size_t e = 0; e < t.size(); ++e) CHECK(translation_row_check(sc, t.name, e).verdict == RowForcing::forced_translate);
    CHECK_THROWS(translation_row_check(sq, "square", 4));
}

TEST_CASE("recomposition") {
    const ConvexInstance& ci = fig7();
    const Protoset& d = ci.build.derived;
    Protoset sc = builtin::schmitt_fig4();
    Isometry g = Isometry::rotation_about({q(1, 3), q(2, 7)}, q(1, 2), r3(1, 2));
    g.tx = g.tx + Scalar(5);
    for (std::string o : {"red", "purple"}) {
        INFO(o);
        auto r = check_recomposition(d, pieces_of(ci, o, g), sc);
        CHECK(r.ok);
        REQUIRE(r.original.tiles.size() == 1);
        CHECK(r.original.tiles[0].prototile == o);
        Patch p = pieces_of(ci, o, g);
        p.tiles.pop_back();
        CHECK_FALSE(check_recomposition(d, p, sc).ok);
    }
    auto rc = translation_row_check(sc, "red", 0);
    REQUIRE_FALSE(rc.survivors.empty());
    Patch two = pieces_of(ci, "red", Isometry::identity());
    for (auto& x : pieces_of(ci, rc.survivors[0].prototile, rc.survivors[0].pose).tiles) two.tiles.push_back(x);
    auto r2 = check_recomposition(d, two, sc);
    CHECK(r2.ok);
    CHECK(r2.original.tiles.size() == 2);
    CHECK(verify_patch(sc, r2.original).empty());

    // marks on every boundary edge: a patch recomposes to itself
    Protoset s3 = builtin::sigma3_fig5(), s3m = s3;
    for (auto& t : s3m.tiles) {
        for (size_t e = 0; e < t.size(); ++e) t.marks.push_back({t.vertex(e), t.vertex(e + 1)});
        t.group_tag = t.name;
    }
    Patch pp;
    pp.tiles = {{"P", Isometry::identity()}, {"P", Isometry::translation({0, 1})}};
    auto r3 = check_recomposition(s3m, pp, s3);
    CHECK(r3.ok);
    CHECK(r3.original.tiles.size() == 2);
}
