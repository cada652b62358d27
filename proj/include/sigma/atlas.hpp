#pragma once

#include "protoset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace sigma {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FanCorner {
    std::string tile;
    size_t corner = 0;
    bool reflected = false;
    friend bool operator==(const FanCorner&, const FanCorner&) = default;
};

enum class FigureTotal { full, half };

struct VertexFigure {
    std::vector<FanCorner> fan;  // ccw around the vertex
    FigureTotal total = FigureTotal::full;
    std::string key;             // canonical description
};

// edge seen from a corner: exact length class, label class, the corner at its far end
struct RayEdge {
    int len = 0;
    int label = 0;  // 0 plain, odd bump, even nick; (label+1)/2 is the key id
    size_t far_corner = 0;
};

struct OrientedCorner {
    size_t tile = 0, corner = 0;
    bool reflected = false;
    int angle = 0;  // exact angle class
    double deg = 0;
    RayEdge first, second;
    int local = 0;  // local geometry class
};

class CornerTable {
public:
    explicit CornerTable(const Protoset& ps) : ps_(ps) {
        std::vector<Scalar> lens;
        auto len_id = [&](const Scalar& l) {
            for (size_t i = 0; i < lens.size(); ++i)
                if (lens[i] == l) return static_cast<int>(i);
            lens.push_back(l);
            return static_cast<int>(lens.size() - 1);
        };
        std::map<std::string, int> keys;
        auto label_id = [&](const EdgeLabel& l) {
            if (l.is_plain()) return 0;
            auto [it, _] = keys.emplace(l.key, static_cast<int>(keys.size()) + 1);
            return 2 * it->second - (l.kind == EdgeKind::bump ? 1 : 0);
        };
        for (size_t t = 0; t < ps.tiles.size(); ++t) {
            const Prototile& p = ps.tiles[t];
            size_t n = p.size();
            for (size_t j = 0; j < n; ++j) {
                Turn tr = p.corner(j);
                int aid = -1;
                for (size_t k = 0; k < angles_.size(); ++k)
                    if (std::abs(angle_deg_[k] - tr.degrees()) < 1e-6 && same_angle(angles_[k], tr)) aid = static_cast<int>(k);
                if (aid < 0) {
                    angles_.push_back(tr);
                    angle_deg_.push_back(tr.degrees());
                    aid = static_cast<int>(angles_.size() - 1);
                }
                size_t jp = (j + 1) % n, jm = (j + n - 1) % n;
                RayEdge ej{len_id(p.edge_len2(j)), label_id(p.labels[j]), jp};
                RayEdge em{len_id(p.edge_len2(jm)), label_id(p.labels[jm]), jm};
                for (int r = 0; r <= (ps.reflections_allowed ? 1 : 0); ++r) {
                    OrientedCorner c;
                    c.tile = t;
                    c.corner = j;
                    c.reflected = r;
                    c.angle = aid;
                    c.deg = angle_deg_[aid];
                    c.first = r ? em : ej;
                    c.second = r ? ej : em;
                    corners_.push_back(c);
                }
            }
        }
        // local classes: same angle, same edge lengths and labels on each ray
        std::map<std::tuple<int, int, int, int, int, int>, int> cls;
        for (auto& c : corners_) {
            bool keyed = c.first.label || c.second.label;
            auto k = std::make_tuple(c.angle, c.first.len, c.first.label, c.second.len, c.second.label,
                                     keyed ? int(c.reflected) : 0);
            auto [it, _] = cls.emplace(k, static_cast<int>(cls.size()));
            c.local = it->second;
        }
        lens_ = lens;
    }

    const Protoset& protoset() const { return ps_; }
    const std::vector<OrientedCorner>& corners() const { return corners_; }
    const Turn& angle(int id) const { return angles_[id]; }
    double angle_deg(int id) const { return angle_deg_[id]; }
    size_t angle_count() const { return angles_.size(); }
    const Scalar& length(int id) const { return lens_[id]; }
    double min_angle() const { return *std::min_element(angle_deg_.begin(), angle_deg_.end()); }

    const OrientedCorner* find(size_t tile, size_t corner, bool refl) const {
        for (auto& c : corners_)
            if (c.tile == tile && c.corner == corner && c.reflected == refl) return &c;
        return nullptr;
    }

private:
    const Protoset& ps_;
    std::vector<OrientedCorner> corners_;
    std::vector<Turn> angles_;
    std::vector<double> angle_deg_;
    std::vector<Scalar> lens_;
};

// exact sum of angle classes
inline Angle angle_sum(const CornerTable& ct, const std::vector<int>& ids) {
    Angle s = Angle::of(Turn(1, 0));
    for (int i : ids) s = s + Angle::of(ct.angle(i));
    return s;
}

struct AtlasOptions {
    long budget = 50'000'000;
    bool include_half = true;
};

class Atlas {
public:
    Atlas(const Protoset& ps, AtlasOptions opt = {}) : ct_(ps), opt_(opt) {
        if (ps.tiles.empty()) return;
        if (!(ct_.min_angle() > 0)) throw std::invalid_argument("zero corner angle");
        build();
    }

    const CornerTable& table() const { return ct_; }
    const std::vector<VertexFigure>& figures() const { return figs_; }
    const std::vector<std::vector<size_t>>& figure_corners() const { return fig_idx_; }

    // shared ray compatibility between the second edge of one corner and the first edge of the next
    bool compatible(const OrientedCorner& a, const RayEdge& ea, const OrientedCorner& b, const RayEdge& eb) const {
        if (ea.label || eb.label) {
            if (ea.len != eb.len) return false;
            if (ea.label == 0 || eb.label == 0) return false;
            if ((ea.label + 1) / 2 != (eb.label + 1) / 2 || ea.label == eb.label) return false;
            return a.reflected == b.reflected;
        }
        if (ea.len == eb.len) return true;
        // plain edges of different lengths: the shorter one ends inside the longer one
        const Scalar& la = ct_.length(ea.len);
        const Scalar& lb = ct_.length(eb.len);
        const OrientedCorner& s = la < lb ? a : b;
        const RayEdge& se = la < lb ? ea : eb;
        const Prototile& t = ct_.protoset().tiles[s.tile];
        Turn far = t.corner(se.far_corner);
        for (size_t k = 0; k < ct_.angle_count(); ++k)
            if (same_angle(ct_.angle(static_cast<int>(k)), far)) return fills_half(static_cast<int>(k));
        return false;
    }

    // some multiset of corner angles completes theta to a straight angle
    bool fills_half(int theta) const {
        auto it = fill_cache_.find(theta);
        if (it != fill_cache_.end()) return it->second;
        std::vector<int> cur = {theta};
        long nodes = 0;
        auto rec = [&](auto&& self, size_t from, double acc) -> bool {
            if (++nodes > opt_.budget) throw BudgetExceeded("half-fill budget exceeded");
            if (cur.size() > 1 && std::abs(acc - 180.0) < 1e-6 && angle_sum(ct_, cur).is_half()) return true;
            for (size_t a = from; a < ct_.angle_count(); ++a) {
                double d = ct_.angle_deg(static_cast<int>(a));
                if (acc + d > 180.0 + 1e-6) continue;
                cur.push_back(static_cast<int>(a));
                bool ok = self(self, a, acc + d);
                cur.pop_back();
                if (ok) return true;
            }
            return false;
        };
        bool r = rec(rec, 0, ct_.angle_deg(theta));
        fill_cache_[theta] = r;
        return r;
    }

private:
    void build() {
        const auto& cs = ct_.corners();
        size_t n = cs.size();
        compat_.assign(n * n, 0);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) compat_[a * n + b] = compatible(cs[a], cs[a].second, cs[b], cs[b].first);
        std::vector<size_t> fan;
        long nodes = 0;
        for (size_t s = 0; s < cs.size(); ++s) {
            fan.assign(1, s);
            dfs(s, fan, cs[s].deg, nodes);
        }
        std::sort(order_.begin(), order_.end());
        order_.erase(std::unique(order_.begin(), order_.end(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; }),
                     order_.end());
        for (auto& [key, idx] : order_) {
            (void)key;
            figs_.push_back(found_[idx]);
            fig_idx_.push_back(found_idx_[idx]);
        }
    }

    void dfs(size_t start, std::vector<size_t>& fan, double acc, long& nodes) {
        if (++nodes > opt_.budget) throw BudgetExceeded("atlas budget exceeded");
        const auto& cs = ct_.corners();
        if (std::abs(acc - 360.0) < 1e-6) {
            if (compat_[fan.back() * cs.size() + fan.front()]) record(fan, FigureTotal::full);
            return;
        }
        if (opt_.include_half && std::abs(acc - 180.0) < 1e-6 && cs[fan.front()].first.label == 0 && cs[fan.back()].second.label == 0)
            record(fan, FigureTotal::half);
        for (size_t k = 0; k < cs.size(); ++k) {
            const OrientedCorner& c = cs[k];
            if (acc + c.deg > 360.0 + 1e-6) continue;
            // full figures are generated from their smallest corner only; half figures may start anywhere
            if (k < start && acc + c.deg > 180.0 + 1e-6) continue;
            if (!compat_[fan.back() * cs.size() + k]) continue;
            fan.push_back(k);
            dfs(start, fan, acc + c.deg, nodes);
            fan.pop_back();
        }
    }

    void record(const std::vector<size_t>& fan, FigureTotal total) {
        const auto& cs = ct_.corners();
        std::vector<int> ids;
        for (size_t i : fan) ids.push_back(cs[i].angle);
        Angle s = angle_sum(ct_, ids);
        if (total == FigureTotal::full) {
            if (!s.is_full()) return;
            for (size_t i : fan)
                if (i < fan.front()) return;
        } else if (!s.is_half()) {
            return;
        }
        VertexFigure f;
        f.total = total;
        for (size_t i : fan) f.fan.push_back({ct_.protoset().tiles[cs[i].tile].name, cs[i].corner, cs[i].reflected});
        auto [key, canon] = canonical(fan, total);
        f.key = key;
        f.fan.clear();
        for (size_t i : canon) f.fan.push_back({ct_.protoset().tiles[cs[i].tile].name, cs[i].corner, cs[i].reflected});
        order_.push_back({key, found_.size()});
        found_.push_back(f);
        found_idx_.push_back(canon);
    }

    size_t mirror(size_t i) const {
        const auto& c = ct_.corners()[i];
        const OrientedCorner* m = ct_.find(c.tile, c.corner, !c.reflected);
        return m ? static_cast<size_t>(m - ct_.corners().data()) : i;
    }

    std::string describe(const std::vector<size_t>& fan, FigureTotal total) const {
        const auto& cs = ct_.corners();
        std::string s = total == FigureTotal::full ? "full:" : "half:";
        for (size_t i : fan) {
            s += ct_.protoset().tiles[cs[i].tile].name + "#" + std::to_string(cs[i].corner) + (cs[i].reflected ? "'" : "");
            s += ",";
        }
        return s;
    }

    std::pair<std::string, std::vector<size_t>> canonical(const std::vector<size_t>& fan, FigureTotal total) const {
        std::vector<std::vector<size_t>> cands;
        size_t m = fan.size();
        std::vector<size_t> rev;
        for (size_t i = m; i-- > 0;) rev.push_back(ct_.protoset().reflections_allowed ? mirror(fan[i]) : fan[i]);
        bool mirror_ok = ct_.protoset().reflections_allowed;
        for (int r = 0; r <= (mirror_ok ? 1 : 0); ++r) {
            const auto& base = r ? rev : fan;
            if (total == FigureTotal::half) {
                cands.push_back(base);
                continue;
            }
            for (size_t k = 0; k < m; ++k) {
                std::vector<size_t> v;
                for (size_t i = 0; i < m; ++i) v.push_back(base[(k + i) % m]);
                cands.push_back(v);
            }
        }
        std::string best;
        std::vector<size_t> bv;
        for (auto& v : cands) {
            std::string d = describe(v, total);
            if (best.empty() || d < best) {
                best = d;
                bv = v;
            }
        }
        return {best, bv};
    }

    CornerTable ct_;
    AtlasOptions opt_;
    mutable std::map<int, bool> fill_cache_;
    std::vector<char> compat_;
    std::vector<VertexFigure> found_, figs_;
    std::vector<std::vector<size_t>> found_idx_, fig_idx_;
    std::vector<std::pair<std::string, size_t>> order_;
};

inline std::vector<VertexFigure> vertex_atlas(const Protoset& ps, AtlasOptions opt = {}) { return Atlas(ps, opt).figures(); }

inline json figure_to_json(const VertexFigure& f) {
    json fan = json::array();
    for (auto& c : f.fan) fan.push_back({{"tile", c.tile}, {"corner", c.corner}, {"reflected", c.reflected}});
    return {{"total", f.total == FigureTotal::full ? "full" : "half"}, {"fan", fan}, {"key", f.key}};
}

inline VertexFigure figure_from_json(const json& j) {
    VertexFigure f;
    try {
        std::string t = j.at("total").get<std::string>();
        if (t != "full" && t != "half") throw ParseError("figure.total: expected full or half");
        f.total = t == "full" ? FigureTotal::full : FigureTotal::half;
        for (auto& c : j.at("fan")) f.fan.push_back({c.at("tile").get<std::string>(), c.at("corner").get<size_t>(), c.value("reflected", false)});
        f.key = j.value("key", "");
    } catch (const json::exception& e) {
        throw ParseError(std::string("figure: ") + e.what());
    }
    return f;
}

enum class ForcedStatus { unique, multiple, impossible };

inline const char* status_name(ForcedStatus s) {
    return s == ForcedStatus::unique ? "unique" : (s == ForcedStatus::multiple ? "multiple" : "impossible");
}

struct ForcedResult {
    ForcedStatus status = ForcedStatus::impossible;
    std::vector<VertexFigure> witnesses;  // one per local configuration
    std::vector<std::vector<VertexFigure>> alternatives;  // figures sharing that configuration
};

// figures containing the corner, grouped by local geometry; unique iff one configuration survives
inline ForcedResult forced_corner(const Atlas& atlas, const std::string& tile, size_t corner) {
    const CornerTable& ct = atlas.table();
    size_t t = ct.protoset().index_of(tile);
    if (corner >= ct.protoset().tiles[t].size()) throw std::out_of_range("no such corner");
    ForcedResult r;
    std::map<std::string, size_t> groups;
    const auto& cs = ct.corners();
    for (size_t f = 0; f < atlas.figures().size(); ++f) {
        const auto& idx = atlas.figure_corners()[f];
        bool hit = false;
        for (size_t i : idx)
            if (cs[i].tile == t && cs[i].corner == corner) hit = true;
        if (!hit) continue;
        // local signature of the fan, canonical over rotation and mirror
        auto sig = [&](const std::vector<size_t>& v) {
            std::string s;
            for (size_t i : v) s += std::to_string(cs[i].local) + ",";
            return s;
        };
        const auto& fig = atlas.figures()[f];
        std::string best;
        size_t m = idx.size();
        for (size_t k = 0; k < m; ++k) {
            std::vector<size_t> v;
            for (size_t i = 0; i < m; ++i) v.push_back(idx[(k + i) % m]);
            if (fig.total == FigureTotal::half && k) break;
            std::string s = sig(v);
            if (best.empty() || s < best) best = s;
        }
        best = (fig.total == FigureTotal::full ? "F" : "H") + best;
        auto [it, fresh] = groups.emplace(best, r.witnesses.size());
        if (fresh) {
            r.witnesses.push_back(fig);
            r.alternatives.push_back({fig});
        } else {
            r.alternatives[it->second].push_back(fig);
        }
    }
    r.status = r.witnesses.empty() ? ForcedStatus::impossible
                                   : (r.witnesses.size() == 1 ? ForcedStatus::unique : ForcedStatus::multiple);
    return r;
}

}  // namespace sigma
