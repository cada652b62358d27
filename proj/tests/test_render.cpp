#include <doctest.h>

#include "support.hpp"

using namespace testing;

namespace {

size_t count(const std::string& s, const std::string& needle) {
    size_t n = 0;
    for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("svg of a single square") {
    Protoset sq = builtin::unit_square();
    SvgOptions o;
    o.scale = 10;
    o.margin = 0;
    std::string s = render_svg(sq, single_tile(sq, "square"), o);
    CHECK(s.rfind("<?xml", 0) == 0);
    CHECK(count(s, "<path id=\"tile") == 1);
    CHECK(s.find("d=\"M 0 10 L 10 10 L 10 0 L 0 0 Z\"") != std::string::npos);
    CHECK(s.find("width=\"10\" height=\"10\"") != std::string::npos);
    CHECK(count(s, "<svg") == 1);
    CHECK(count(s, "</svg>") == 1);
    o.scale = 0;
    CHECK_THROWS(render_svg(sq, single_tile(sq, "square"), o));
}

TEST_CASE("svg of the convex protoset shows marks") {
    Protoset d = builtin::convex_fig7();
    Patch g = protoset_gallery(d);
    CHECK(verify_patch(d, g).empty());
    std::string s = render_svg(d, g);
    CHECK(count(s, "<path id=\"tile") == 6);
    CHECK(s.find("<g id=\"marks\" stroke=\"#d0202a\"") != std::string::npos);
    size_t marks = 0;
    for (auto& t : d.tiles) marks += t.marks.size();
    CHECK(marks > 0);
    size_t at = s.find("<g id=\"marks\"");
    CHECK(count(s.substr(at), "<path d=") == marks);
    SvgOptions bare;
    bare.show_marks = false;
    bare.show_labels = false;
    std::string b = render_svg(d, g, bare);
    CHECK(b.find("id=\"marks\"") == std::string::npos);
    CHECK(b.find("id=\"labels\"") == std::string::npos);
}

TEST_CASE("svg output is stable") {
    Protoset s3 = builtin::sigma3_fig5();
    Patch p;
    p.tiles = {{"P", Isometry::identity()}, {"P", Isometry::translation({0, 1})}};
    std::string a = render_svg(s3, p), b = render_svg(s3, p);
    CHECK(a == b);
    CHECK(count(a, "<g id=\"labels\"") == 1);
    SvgOptions o;
    o.places = 3;
    CHECK(render_svg(s3, p, o).find("0.0000") == std::string::npos);
    CHECK(detail::num(-0.0000001, 3) == "0");
    CHECK(detail::num(2.5, 9) == "2.5");
    CHECK(detail::num(3.0, 2) == "3");
}
