#pragma once

#include <sigma/sigma.hpp>

#include <random>

namespace testing {

using namespace sigma;
using builtin::q;
using builtin::r3;

inline Scalar rnd(std::mt19937_64& g) {
    std::uniform_int_distribution<long> n(-40, 40), d(1, 12);
    return Scalar(mpq_class(n(g), d(g)), mpq_class(n(g), d(g)));
}

inline Isometry random_iso(std::mt19937_64& g, bool allow_reflection = true) {
    static const std::vector<std::pair<Scalar, Scalar>> rots = {
        {1, 0}, {0, 1}, {-1, 0}, {Scalar::frac(3, 5), Scalar::frac(4, 5)},
        {Scalar::frac(1, 2), Scalar(0, mpq_class(1, 2))}, {Scalar(0, mpq_class(1, 2)), Scalar::frac(-1, 2)}};
    auto& r = rots[g() % rots.size()];
    Isometry iso = Isometry::rotation(r.first, r.second);
    iso.reflected = allow_reflection && g() % 2;
    iso.tx = rnd(g);
    iso.ty = rnd(g);
    return iso;
}

inline Protoset single(const std::string& name, Polygon poly) {
    Protoset ps;
    ps.name = name;
    ps.tiles.push_back(builtin::make_tile(name, "#999999", std::move(poly),
                                          std::vector<std::string>(0)));
    ps.tiles[0].labels.assign(ps.tiles[0].size(), EdgeLabel::plain());
    return ps;
}

// corners near 108 degrees, no two of them fill a straight angle with a third
inline Protoset generic_pentagon() { return single("pent", {{0, 0}, {10, 0}, {13, 9}, {5, 15}, {-3, 8}}); }

// a square with a 60 degree spike cut into its bottom edge
inline Protoset notched_square() {
    return single("notch", {{0, 0}, {1, 0}, {q(3, 2), r3(1, 2)}, {2, 0}, {4, 0}, {4, 4}, {0, 4}});
}

inline std::vector<std::string> all_builtins() { return builtin::names(); }

}  // namespace testing
