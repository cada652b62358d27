#pragma once

#include <sigma/rowgraph.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace testing {

// bit i*n + j is the edge i -> j; loops allowed
inline sigma::Digraph digraph_from_mask(size_t n, uint32_t mask, uint32_t continuum = 0) {
    sigma::Digraph g;
    for (size_t i = 0; i < n; ++i) g.names.push_back("v" + std::to_string(i));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            uint32_t b = 1u << (i * n + j);
            if (mask & b) g.edges.push_back({i, j, (continuum & b) != 0});
        }
    return g;
}

// calls f(mask) once per isomorphism class, with the smallest mask of the class
class DigraphCensus {
public:
    explicit DigraphCensus(size_t n) : n_(n) {
        std::vector<size_t> p(n);
        for (size_t i = 0; i < n; ++i) p[i] = i;
        do perms_.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        // row bits permuted by each perm, as a table over all row values
        rows_.assign(perms_.size(), std::vector<uint32_t>(1u << n));
        for (size_t k = 0; k < perms_.size(); ++k)
            for (uint32_t r = 0; r < (1u << n); ++r) {
                uint32_t v = 0;
                for (size_t j = 0; j < n; ++j)
                    if (r >> j & 1) v |= 1u << perms_[k][j];
                rows_[k][r] = v;
            }
        inv_.resize(perms_.size());
        for (size_t k = 0; k < perms_.size(); ++k) {
            inv_[k].resize(n);
            for (size_t i = 0; i < n; ++i) inv_[k][perms_[k][i]] = i;
        }
    }

    bool canonical(uint32_t mask) const {
        uint32_t rm = (1u << n_) - 1;
        for (size_t k = 1; k < perms_.size(); ++k) {
            // compare from the top row down; the image row p(i) holds the permuted row i
            for (size_t r = n_; r-- > 0;) {
                uint32_t img = rows_[k][mask >> (inv_[k][r] * n_) & rm];
                uint32_t own = mask >> (r * n_) & rm;
                if (img < own) return false;
                if (img > own) break;
            }
        }
        return true;
    }

    size_t for_each(const std::function<void(uint32_t)>& f) const {
        size_t count = 0;
        uint64_t total = uint64_t(1) << (n_ * n_);
        for (uint64_t m = 0; m < total; ++m)
            if (canonical(static_cast<uint32_t>(m))) {
                ++count;
                f(static_cast<uint32_t>(m));
            }
        return count;
    }

private:
    size_t n_;
    std::vector<std::vector<size_t>> perms_, inv_;
    std::vector<std::vector<uint32_t>> rows_;
};

}  // namespace testing

namespace testing {

// Independent cardinality oracle. Counts walks by dynamic programming and extrapolates:
// two distinct first-return loops at one node mean exponential growth, otherwise the
// number of length-L windows is eventually a polynomial in L and is linear iff finite.
struct WalkOracle {
    sigma::Cardinality kind = sigma::Cardinality::finite;
    long count = 0;
};

inline WalkOracle walk_oracle(const sigma::Digraph& g) {
    size_t n = g.size();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto& e : g.edges) adj[e.from][e.to] = 1;
    // v is on a bi-infinite walk iff walks of length n reach it and leave it
    auto ends = [&](bool forward) {
        std::vector<char> cur(n, 1);
        for (size_t s = 0; s < n; ++s) {
            std::vector<char> nx(n, 0);
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b)
                    if (cur[a] && (forward ? adj[a][b] : adj[b][a])) nx[b] = 1;
            cur = nx;
        }
        return cur;
    };
    auto in = ends(true), out = ends(false);
    std::vector<char> live(n);
    for (size_t v = 0; v < n; ++v) live[v] = in[v] && out[v];
    WalkOracle r;
    for (auto& e : g.edges)
        if (e.continuum && live[e.from] && live[e.to]) {
            r.kind = sigma::Cardinality::uncountable;
            return r;
        }
    std::vector<std::vector<size_t>> primitive;
    for (size_t v = 0; v < n; ++v) {
        if (!live[v]) continue;
        size_t loops = 0;
        std::vector<size_t> path{v};
        std::function<void(size_t)> go = [&](size_t x) {
            for (size_t y = 0; y < n; ++y) {
                if (!adj[x][y] || !live[y]) continue;
                if (y == v) {
                    ++loops;
                    auto c = path;
                    std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
                    if (std::find(primitive.begin(), primitive.end(), c) == primitive.end()) primitive.push_back(c);
                    continue;
                }
                if (std::find(path.begin(), path.end(), y) != path.end()) continue;
                path.push_back(y);
                go(y);
                path.pop_back();
            }
        };
        go(v);
        if (loops >= 2) {
            r.kind = sigma::Cardinality::uncountable;
            return r;
        }
    }
    // growth is polynomial from here on, so 64-bit counts are plenty
    size_t L = 2 * n * n + 2, K = 16;
    std::vector<uint64_t> cnt(n), win;
    for (size_t v = 0; v < n; ++v) cnt[v] = live[v];
    for (size_t len = 1; len < L + K; ++len) {
        if (len >= L) {
            uint64_t s = 0;
            for (auto c : cnt) s += c;
            win.push_back(s);
        }
        std::vector<uint64_t> nx(n, 0);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                if (adj[a][b] && live[a] && live[b]) nx[b] += cnt[a];
        cnt = nx;
    }
    for (size_t k = 0; k + 2 < win.size(); ++k)
        if (win[k + 2] + win[k] != 2 * win[k + 1]) {
            r.kind = sigma::Cardinality::countably_infinite;
            return r;
        }
    r.count = static_cast<long>(primitive.size() + (win[1] - win[0]));
    return r;
}

}  // namespace testing
