#include "sigma/sigma.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace sigma;

namespace {

enum Exit { ok = 0, checks_failed = 1, usage = 2, budget = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// a file path, "-", or builtin:<name>
Protoset load_protoset(const std::string& src) {
    if (src.rfind("builtin:", 0) == 0) return builtin::by_name(src.substr(8));
    return protoset_from_json(read_json(src));
}

void emit(const json& j, const std::string& out) {
    std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out);
    f << text;
}

long default_budget() {
    if (const char* e = std::getenv("SIGMA_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(e, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw UsageError("SIGMA_BUDGET must be a positive integer");
    }
    return 2'000'000;
}

Polygon parse_region(const std::string& text) {
    // "x,y;x,y;..." with rationals like 3/2, or a JSON file of points
    Polygon p;
    if (text.find(';') == std::string::npos) {
        json j = read_json(text);
        for (size_t i = 0; i < j.size(); ++i) p.push_back(point_from_json(j[i], "region[" + std::to_string(i) + "]"));
        return p;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto c = item.find(',');
        if (c == std::string::npos) throw UsageError("region point needs x,y: " + item);
        p.push_back({scalar_from_json(json(item.substr(0, c)), "region.x"), scalar_from_json(json(item.substr(c + 1)), "region.y")});
    }
    return p;
}

int cmd_validate(const std::string& file, const std::string& out) {
    Protoset ps = load_protoset(file);
    auto issues = validate_protoset(ps);
    json j = {{"name", ps.name}, {"valid", issues.empty()}, {"issues", issues}};
    emit(j, out);
    std::cerr << ps.name << ": " << (issues.empty() ? "valid" : std::to_string(issues.size()) + " issue(s)") << "\n";
    return issues.empty() ? ok : checks_failed;
}

int cmd_atlas(const std::string& file, long bud, const std::string& tile, long corner, const std::string& out) {
    Protoset ps = load_protoset(file);
    auto issues = validate_protoset(ps);
    if (!issues.empty()) throw ParseError("invalid protoset: " + issues.front());
    Atlas at(ps, AtlasOptions{bud, true});
    json figs = json::array();
    for (auto& f : at.figures()) figs.push_back(figure_to_json(f));
    json j = {{"protoset", ps.name}, {"figures", figs}};
    if (!tile.empty()) {
        if (corner < 0) throw UsageError("--corner is required with --tile");
        ForcedResult fr = forced_corner(at, tile, static_cast<size_t>(corner));
        json w = json::array();
        for (auto& f : fr.witnesses) w.push_back(figure_to_json(f));
        j["forced"] = {{"tile", tile}, {"corner", corner}, {"status", status_name(fr.status)}, {"witnesses", w}};
    }
    emit(j, out);
    std::cerr << ps.name << ": " << at.figures().size() << " vertex figure(s)\n";
    return ok;
}

int cmd_surround(const std::string& file, const std::string& tile, int levels, long bud, const std::string& out) {
    Protoset ps = load_protoset(file);
    if (tile.empty()) throw UsageError("--tile is required");
    if (!ps.find(tile)) throw UsageError("unknown tile " + tile);
    SurroundResult r = surround(ps, single_tile(ps, tile), levels, bud);
    json cor = json::array(), sl = json::array();
    for (auto& p : r.coronas) cor.push_back(patch_to_json(p));
    for (auto& p : r.slides) sl.push_back(patch_to_json(p));
    json j = {{"protoset", ps.name}, {"tile", tile}, {"levels", levels}, {"status", status_name(r.status)},
              {"coronas", cor}, {"slid_coronas", sl}, {"nodes", r.nodes}};
    if (r.blocking_site) j["blocking_site"] = point_to_json(*r.blocking_site);
    emit(j, out);
    std::cerr << tile << ": " << status_name(r.status) << ", " << r.coronas.size() << " corona(s), " << r.slides.size()
              << " slid\n";
    return ok;
}

int cmd_tile_region(const std::string& file, const std::string& region, bool modsym, long bud, const std::string& out) {
    Protoset ps = load_protoset(file);
    RegionResult r = tile_region(ps, parse_region(region), modsym, bud);
    json t = json::array();
    for (auto& p : r.tilings) t.push_back(patch_to_json(p));
    emit({{"protoset", ps.name}, {"modulo_symmetry", modsym}, {"count", r.tilings.size()}, {"tilings", t}}, out);
    std::cerr << r.tilings.size() << " tiling(s)\n";
    return ok;
}

int cmd_rows(const std::string& file, size_t bound, const std::string& out) {
    Protoset ps = load_protoset(file);
    RowGraph g = build_row_graph(ps);
    CardinalityVerdict v = classify(g.graph);
    bool valid = validate_verdict(g.graph, v);
    json edges = json::array();
    for (auto& e : g.edges)
        edges.push_back({{"above", g.graph.names[e.from]}, {"below", g.graph.names[e.to]}, {"continuum", e.continuum},
                         {"offset", point_to_json(e.offset)}});
    json lat = json::object();
    for (auto& r : g.rows) {
        json a = json::array();
        for (auto& [e, f] : r.lateral_checks) a.push_back({{"edge", e}, {"verdict", forcing_name(f)}});
        lat[r.decl.id] = a;
    }
    json j = {{"protoset", ps.name}, {"rows", ps.rows}, {"edges", edges}, {"lateral_checks", lat},
              {"verdict", verdict_to_json(g.graph, v)}, {"witness_valid", valid}};
    if (v.kind != Cardinality::uncountable) {
        json fam = json::array();
        for (auto& c : enumerate_walk_classes(g.graph, bound)) fam.push_back(describe(g.graph, c));
        j["walk_classes"] = fam;
    }
    emit(j, out);
    std::cerr << ps.name << ": " << cardinality_name(v.kind) << "\n";
    return valid ? ok : checks_failed;
}

int cmd_convexify(const std::string& file, const std::string& plan, const std::string& beta, uint64_t seed, unsigned threads,
                  size_t limit, long bud, const std::string& out) {
    Protoset base = load_protoset(file);
    std::function<SubdivisionPlan(const Point&, const Point&)> tmpl;
    if (plan == "fig7") {
        tmpl = [](const Point& q, const Point& r) { return builtin::fig7_plan(q, r); };
    } else if (plan == "fig8") {
        tmpl = [](const Point&, const Point&) { return builtin::fig8_plan(); };
    } else {
        SubdivisionPlan p = plan_from_json(read_json(plan));
        tmpl = [p](const Point&, const Point&) { return p; };
    }
    std::string bt = beta.empty() ? base.tiles.front().name : beta;
    SearchResult sr = search_parameters(base, tmpl, default_candidates(seed, limit), bt, threads);
    const Protoset& d = sr.instance.build.derived;
    json cen = json::object();
    for (auto& [k, n] : census(d)) cen[std::to_string(k)] = n;
    bool convex = true;
    for (auto& t : d.tiles) convex = convex && convexity(t.boundary);
    json j = {{"candidate", sr.index}, {"census", cen}, {"all_convex", convex}, {"battery", sr.report.to_json()}};
    bool pass = convex && sr.report.all_pass();
    try {
        Atlas at(d, AtlasOptions{bud, true});
        ForcingSummary fs = verify_forcing(sr.instance, at);
        j["forcing"] = fs.to_json();
        pass = pass && fs.all_unique() && fs.q_triple_distinct;
    } catch (const BudgetExceeded& e) {
        j["forcing"] = {{"note", e.what()}};
        pass = false;
    }
    j["protoset"] = protoset_to_json(d);
    emit(j, out);
    std::cerr << "candidate " << sr.index << ": battery " << (sr.report.all_pass() ? "pass" : "fail") << "\n";
    return pass ? ok : checks_failed;
}

int cmd_fig8(long bud, const std::string& out) {
    Fig8Report r = build_fig8_instance(bud);
    json cen = json::object();
    for (auto& [k, n] : r.census) cen[std::to_string(k)] = n;
    json j = {{"census", cen}, {"all_convex", r.all_convex}, {"central_symmetry", r.central_symmetry}};
    j["battery"] = r.battery_note.empty() ? r.battery.to_json() : json{{"note", r.battery_note}};
    if (r.forcing) {
        json a = json::array();
        for (auto& c : *r.forcing)
            a.push_back({{"tile", c.tile}, {"corner", c.corner}, {"status", status_name(c.status)}});
        j["forcing"] = a;
    } else {
        j["forcing"] = {{"note", r.forcing_note}};
    }
    j["protoset"] = protoset_to_json(r.instance.build.derived);
    emit(j, out);
    bool pass = r.census == std::map<size_t, int>{{4, 5}, {5, 4}, {6, 1}, {7, 1}} && r.all_convex && r.central_symmetry;
    std::cerr << "fig8: census " << (pass ? "ok" : "mismatch") << "\n";
    return pass ? ok : checks_failed;
}

int write_svg(const Protoset& ps, const Patch& patch, const std::string& out, bool marks, bool labels, double scale,
              int places) {
    SvgOptions o;
    o.show_marks = marks;
    o.show_labels = labels;
    o.scale = scale;
    o.places = places;
    std::string svg = render_svg(ps, patch, o);
    if (out.empty() || out == "-") std::cout << svg;
    else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw UsageError("cannot write " + out);
        f << svg;
    }
    return ok;
}

int cmd_render(const std::string& file, const std::string& protoset, const std::string& out, bool marks, bool labels,
               double scale, int places) {
    Protoset ps;
    Patch patch;
    if (file.rfind("builtin:", 0) == 0) {
        ps = load_protoset(file);
        patch = protoset_gallery(ps);
        return write_svg(ps, patch, out, marks, labels, scale, places);
    }
    json j = read_json(file);
    if (j.is_object() && j.contains("tiles")) {
        ps = protoset_from_json(j);
        patch = protoset_gallery(ps);
    } else {
        if (protoset.empty()) throw UsageError("--protoset is required to render a patch");
        ps = load_protoset(protoset);
        patch = patch_from_json(j);
    }
    auto issues = verify_patch(ps, patch);
    if (!issues.empty()) throw ParseError("patch: " + issues.front());
    return write_svg(ps, patch, out, marks, labels, scale, places);
}

int cmd_builtins(const std::string& name, bool list) {
    if (list || name.empty()) {
        for (auto& n : builtin::names()) std::cout << n << "\n";
        return ok;
    }
    std::cout << dump_protoset(builtin::by_name(name));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sigma: exact tiling checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out;
    long bud = 0;
    app.add_option("-o,--output", out, "write data here instead of standard output");
    app.add_option("--budget", bud, "search node limit (default from SIGMA_BUDGET or 2000000)");

    std::string file;
    auto* validate = app.add_subcommand("validate", "check a protoset file ('-' for stdin)");
    validate->add_option("file", file)->required();

    std::string tile;
    long corner = -1;
    auto* atlas = app.add_subcommand("atlas", "enumerate vertex figures");
    atlas->add_option("file", file)->required();
    atlas->add_option("--tile", tile, "also report forcing at this tile's corner");
    atlas->add_option("--corner", corner);

    int levels = 1;
    auto* sur = app.add_subcommand("surround", "all k-coronas of one tile");
    sur->add_option("file", file)->required();
    sur->add_option("--tile", tile)->required();
    sur->add_option("--levels", levels)->check(CLI::PositiveNumber);

    std::string region;
    bool modsym = false;
    auto* reg = app.add_subcommand("tile-region", "all tilings of a polygon");
    reg->add_option("file", file)->required();
    reg->add_option("--region", region, "x,y;x,y;... or a JSON file of points")->required();
    reg->add_flag("--modulo-symmetry", modsym, "identify tilings related by a symmetry of the region");

    size_t bound = 12;
    auto* rows = app.add_subcommand("rows", "row graph, cardinality verdict and walk classes");
    rows->add_option("file", file)->required();
    rows->add_option("--bound", bound, "maximum description length of listed walk classes");

    std::string plan = "fig7", beta;
    uint64_t seed = 1;
    unsigned threads = 0;
    size_t limit = 256;
    auto* cvx = app.add_subcommand("convexify", "parameter search, battery and forcing checks");
    cvx->add_option("file", file)->required();
    cvx->add_option("--plan", plan, "fig7, fig8 or a plan JSON file");
    cvx->add_option("--beta-tile", beta);
    cvx->add_option("--seed", seed);
    cvx->add_option("--threads", threads, "0 = hardware concurrency");
    cvx->add_option("--candidates", limit);

    auto* f8 = app.add_subcommand("fig8", "the three-row convex instance");

    std::string protoset;
    bool no_marks = false, no_labels = false;
    double scale = 60;
    int places = 9;
    auto* ren = app.add_subcommand("render", "SVG of a patch or a protoset");
    ren->add_option("file", file)->required();
    ren->add_option("--protoset", protoset, "protoset of the patch (file or builtin:<name>)");
    ren->add_flag("--no-marks", no_marks);
    ren->add_flag("--no-labels", no_labels);
    ren->add_option("--scale", scale)->check(CLI::PositiveNumber);
    ren->add_option("--places", places, "decimal places in coordinates")->check(CLI::Range(0, 17));

    std::string emit_name;
    bool list = false;
    auto* bi = app.add_subcommand("builtins", "list or emit builtin protosets");
    bi->add_option("--emit", emit_name);
    bi->add_flag("--list", list);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    try {
        if (bud <= 0) bud = default_budget();
        if (*validate) return cmd_validate(file, out);
        if (*atlas) return cmd_atlas(file, bud, tile, corner, out);
        if (*sur) return cmd_surround(file, tile, levels, bud, out);
        if (*reg) return cmd_tile_region(file, region, modsym, bud, out);
        if (*rows) return cmd_rows(file, bound, out);
        if (*cvx) return cmd_convexify(file, plan, beta, seed, threads, limit, bud, out);
        if (*f8) return cmd_fig8(bud, out);
        if (*ren) return cmd_render(file, protoset, out, !no_marks, !no_labels, scale, places);
        if (*bi) return cmd_builtins(emit_name, list);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return budget;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return usage;
    } catch (const RowError& e) {
        std::cerr << "rows: " << e.what() << "\n";
        return usage;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return usage;
    } catch (const SearchExhausted& e) {
        std::cerr << e.what() << "\n";
        return checks_failed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return checks_failed;
    }
    return usage;
}
