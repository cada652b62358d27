#include <doctest.h>

#include <sigma/geometry.hpp>

#include <random>

using namespace sigma;

namespace {

Scalar rnd(std::mt19937_64& g) {
    std::uniform_int_distribution<long> n(-40, 40), d(1, 12);
    return Scalar(mpq_class(n(g), d(g)), mpq_class(n(g), d(g)));
}

Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

Isometry random_iso(std::mt19937_64& g) {
    // rational points on the circle and 30 degree multiples
    static const std::vector<std::pair<Scalar, Scalar>> rots = {
        {1, 0}, {0, 1}, {Scalar::frac(3, 5), Scalar::frac(4, 5)}, {Scalar::frac(-5, 13), Scalar::frac(12, 13)},
        {Scalar::frac(1, 2), Scalar(0, mpq_class(1, 2))}, {Scalar(0, mpq_class(1, 2)), Scalar::frac(-1, 2)}};
    auto& r = rots[g() % rots.size()];
    Isometry iso = Isometry::rotation(r.first, r.second);
    iso.reflected = g() % 2;
    iso.tx = rnd(g);
    iso.ty = rnd(g);
    return iso;
}

}  // namespace

TEST_CASE("scalar basics") {
    Scalar a(1, 1), b(1, -1);
    CHECK(a * b == Scalar(-2));
    CHECK(Scalar(2, -1).sign() > 0);
    CHECK(Scalar(0, 1).inverse() == Scalar(0, mpq_class(1, 3)));
    CHECK(Scalar(7, -4).sign() > 0);
    CHECK(Scalar(-7, 4).sign() < 0);
    CHECK_THROWS(Scalar(0) / Scalar(0));
    CHECK_THROWS(Scalar::frac(1, 0));
}

TEST_CASE("scalar field axioms on random samples") {
    std::mt19937_64 g(7);
    for (int i = 0; i < 10000; ++i) {
        Scalar a = rnd(g), b = rnd(g), c = rnd(g);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) REQUIRE(a * a.inverse() == Scalar(1));
    }
}

TEST_CASE("scalar sign agrees with high precision evaluation") {
    std::mt19937_64 g(11);
    mpf_class r3(3, 256);
    r3 = sqrt(r3);
    for (int i = 0; i < 100000; ++i) {
        std::uniform_int_distribution<long> n(-100000, 100000), d(1, 1000);
        Scalar s(mpq_class(n(g), d(g)), mpq_class(n(g), d(g)));
        mpf_class v(0, 256);
        v = mpf_class(s.rat(), 256) + mpf_class(s.root3(), 256) * r3;
        mpf_class err(1e-60, 256);
        if (abs(v) > err) REQUIRE(s.sign() == sgn(v));
    }
}

TEST_CASE("isometry application and composition") {
    Isometry r60 = Isometry::rotation(Scalar::frac(1, 2), Scalar(0, mpq_class(1, 2)));
    CHECK(r60.apply({1, 0}) == Point(Scalar::frac(1, 2), Scalar(0, mpq_class(1, 2))));
    CHECK(Isometry::mirror_x().apply({3, 5}) == Point(3, -5));
    CHECK(Isometry::identity().apply({3, 5}) == Point(3, 5));
    CHECK_THROWS(Isometry::rotation(1, 1));
    std::mt19937_64 g(3);
    for (int i = 0; i < 300; ++i) {
        Isometry a = random_iso(g), b = random_iso(g), c = random_iso(g);
        Point p{rnd(g), rnd(g)};
        REQUIRE(a.compose(b).apply(p) == a.apply(b.apply(p)));
        REQUIRE(a.compose(b).compose(c) == a.compose(b.compose(c)));
        REQUIRE(a.inverse().apply(a.apply(p)) == p);
        REQUIRE(a.compose(a.inverse()) == Isometry::identity());
    }
}

TEST_CASE("turn algebra") {
    Turn q = quarter_turn();
    Turn h = q + q;
    CHECK(classify(h) == TurnClass::straight);
    CHECK(classify(q) == TurnClass::ccw);
    Angle a = Angle::of(q);
    Angle s = a + a + a + a;
    CHECK(s.winding == 1);
    CHECK(s.residual.is_zero_angle());
    CHECK(s.is_full());
    CHECK((a + a).is_half());
    std::mt19937_64 g(5);
    for (int i = 0; i < 200; ++i) {
        Turn u(rnd(g), rnd(g).sign() == 0 ? Scalar(1) : rnd(g));
        Turn v(rnd(g), Scalar(1) + abs(rnd(g)));
        Turn w(Scalar(1) + abs(rnd(g)), rnd(g));
        Angle A = Angle::of(u), B = Angle::of(v), C = Angle::of(w);
        REQUIRE(((A + B) + C) == (A + (B + C)));
        REQUIRE((A + B) == (B + A));
        REQUIRE(((A + B) + C).winding == (A + (B + C)).winding);
    }
}

TEST_CASE("convexity") {
    CHECK(convexity(unit_square()));
    CHECK_FALSE(convexity({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}));
    CHECK_THROWS(convexity({{0, 0}, {1, 0}, {1, 0}}));
    CHECK_THROWS(convexity({{0, 0}, {1, 0}, {2, 0}, {1, 1}}));
}

TEST_CASE("congruence") {
    Polygon sq = unit_square();
    Isometry g = Isometry::rotation(0, 1);
    g.tx = 5;
    g.ty = -2;
    auto w = congruent(sq, transform(g, sq), false);
    REQUIRE(w);
    CHECK_FALSE(congruent(sq, {{0, 0}, {1, 0}, {1, 2}, {0, 2}}, true));
    Polygon tri{{0, 0}, {4, 0}, {1, 2}};
    Polygon mir = transform(Isometry::mirror_x(), tri);
    CHECK_FALSE(congruent(tri, mir, false));
    auto m = congruent(tri, mir, true);
    REQUIRE(m);
    CHECK(m->reflected);
    std::mt19937_64 r(9);
    Polygon pent{{0, 0}, {3, 0}, {4, 2}, {1, 3}, {-1, 1}};
    for (int i = 0; i < 100; ++i) {
        Isometry a = random_iso(r);
        Polygon img = transform(a, pent);
        auto f = congruent(pent, img, true);
        REQUIRE(f);
        REQUIRE(transform(*f, pent).size() == 5);
        REQUIRE(congruent(img, pent, true));
        REQUIRE(congruent(pent, pent, false));
    }
}

TEST_CASE("interior disjointness") {
    Polygon a = unit_square();
    Polygon b = transform(Isometry::translation({1, 0}), a);
    Polygon c = transform(Isometry::translation({Scalar::frac(1, 2), 0}), a);
    CHECK(interiors_disjoint(triangulate(a), triangulate(b)));
    CHECK_FALSE(interiors_disjoint(triangulate(a), triangulate(c)));
    Polygon L{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    Polygon sq{{1, 1}, {2, 1}, {2, 2}, {1, 2}};
    CHECK(interiors_disjoint(triangulate(L), triangulate(sq)));
    CHECK(is_simple(L));
    CHECK_FALSE(is_simple({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
    CHECK(point_in_polygon({Scalar::frac(1, 2), Scalar::frac(1, 2)}, L) == 1);
    CHECK(point_in_polygon({Scalar::frac(3, 2), Scalar::frac(3, 2)}, L) == -1);
    CHECK(point_in_polygon({1, Scalar::frac(3, 2)}, L) == 0);
}
