#pragma once

// Homomorphisms Q_d -> Z ("height functions") and their encodings as rank
// functions, proper 3-colourings and level chains.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hcube/config.hpp"
#include "hcube/cube.hpp"

namespace hcube {

struct ValidationReport {
    bool ok = true;
    std::size_t violation_count = 0;
    std::vector<Edge> violations;  // first 10, in edge order
};

/// Checks |f(u) - f(v)| = 1 on every edge of Q_d.
inline ValidationReport validate(CubeDim dim, std::span<const int> values) {
    if (values.size() != dim.vertex_count())
        throw precondition_error("value array length must be 2^d");
    ValidationReport rep;
    for (Vertex u = 0; u < dim.vertex_count(); ++u) {
        for (int i = 0; i < dim.d(); ++i) {
            Vertex v = u | (Vertex{1} << i);
            if (v == u) continue;
            if (std::abs(values[u] - values[v]) != 1) {
                rep.ok = false;
                ++rep.violation_count;
                if (rep.violations.size() < 10) rep.violations.push_back({u, v});
            }
        }
    }
    std::sort(rep.violations.begin(), rep.violations.end(),
              [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    return rep;
}

class HeightFunction {
public:
    struct unchecked_t {};
    static constexpr unchecked_t unchecked{};

    HeightFunction(CubeDim dim, std::vector<int> values) : dim_(dim), values_(std::move(values)) {
        auto rep = validate(dim_, values_);
        if (!rep.ok) {
            const Edge& e = rep.violations.front();
            throw precondition_error("not a homomorphism: edge (" + bit_string(dim_, e.u) + "," +
                                     bit_string(dim_, e.v) + ")");
        }
    }
    /// For engines whose output is valid by construction.
    HeightFunction(unchecked_t, CubeDim dim, std::vector<int> values) : dim_(dim), values_(std::move(values)) {}

    CubeDim dim() const { return dim_; }
    std::span<const int> values() const { return values_; }
    int operator[](Vertex v) const { return values_[v]; }
    bool normalized() const { return values_[0] == 0; }

    bool operator==(const HeightFunction&) const = default;
    auto operator<=>(const HeightFunction& o) const { return values_ <=> o.values_; }

private:
    CubeDim dim_;
    std::vector<int> values_;
};

/// R(f) in ascending order.
inline std::vector<int> range_of(const HeightFunction& f) {
    std::vector<int> r(f.values().begin(), f.values().end());
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

/// C(f): vertices on whose neighbourhood f is constant.
inline VertexSet constant_nbhd_set(const HeightFunction& f) {
    const CubeDim dim = f.dim();
    VertexSet c(dim);
    for (Vertex v = 0; v < dim.vertex_count(); ++v) {
        const int first = f[v ^ 1u];
        bool constant = true;
        for (int i = 1; i < dim.d() && constant; ++i) constant = f[v ^ (Vertex{1} << i)] == first;
        if (constant) c.insert(v);
    }
    return c;
}

/// K_u(f): vertices reachable from u inside C(f) by steps of length exactly 2.
inline VertexSet two_step_component(const HeightFunction& f, Vertex u) {
    const CubeDim dim = f.dim();
    const VertexSet c = constant_nbhd_set(f);
    VertexSet comp(dim);
    if (!c.contains(u)) return comp;
    comp.insert(u);
    std::deque<Vertex> queue{u};
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        for (int i = 0; i < dim.d(); ++i)
            for (int j = i + 1; j < dim.d(); ++j) {
                Vertex y = x ^ (Vertex{1} << i) ^ (Vertex{1} << j);
                if (c.contains(y) && !comp.contains(y)) {
                    comp.insert(y);
                    queue.push_back(y);
                }
            }
    }
    return comp;
}

// ---------------------------------------------------------------------------
// Rank functions on the Boolean lattice 2^[d]; a subset is a vertex index.

class RankFunction {
public:
    RankFunction(CubeDim dim, std::vector<int> values) : dim_(dim), values_(std::move(values)) {
        if (values_.size() != dim_.vertex_count()) throw precondition_error("rank function length must be 2^d");
        if (values_[0] != 0) throw precondition_error("rank function must vanish on the empty set");
        for (Vertex a = 0; a < dim_.vertex_count(); ++a)
            for (int i = 0; i < dim_.d(); ++i) {
                Vertex b = a | (Vertex{1} << i);
                if (b == a) continue;
                if (values_[b] < values_[a] || values_[b] > values_[a] + 1)
                    throw precondition_error("rank function step violated at " + bit_string(dim_, a) + " -> " +
                                             bit_string(dim_, b));
            }
    }

    CubeDim dim() const { return dim_; }
    std::span<const int> values() const { return values_; }
    int operator[](Vertex a) const { return values_[a]; }
    bool operator==(const RankFunction&) const = default;

private:
    CubeDim dim_;
    std::vector<int> values_;
};

/// f(A) = 2 g(A) - |A|.
inline HeightFunction from_rank_function(const RankFunction& g) {
    std::vector<int> f(g.dim().vertex_count());
    for (Vertex a = 0; a < f.size(); ++a) f[a] = 2 * g[a] - std::popcount(a);
    return HeightFunction(HeightFunction::unchecked, g.dim(), std::move(f));
}

/// g(A) = (f(A) + |A|) / 2 for normalized f.
inline RankFunction to_rank_function(const HeightFunction& f) {
    if (!f.normalized()) throw precondition_error("to_rank_function requires f(0) = 0");
    std::vector<int> g(f.dim().vertex_count());
    for (Vertex a = 0; a < g.size(); ++a) {
        int twice = f[a] + std::popcount(a);
        if (twice % 2 != 0) throw std::logic_error("normalized homomorphism with wrong parity");
        g[a] = twice / 2;
    }
    return RankFunction(f.dim(), std::move(g));
}

// ---------------------------------------------------------------------------
// Proper 3-colourings

class ThreeColoring {
public:
    ThreeColoring(CubeDim dim, std::vector<std::uint8_t> colors) : dim_(dim), colors_(std::move(colors)) {
        if (colors_.size() != dim_.vertex_count()) throw precondition_error("colouring length must be 2^d");
        for (Vertex u = 0; u < dim_.vertex_count(); ++u) {
            if (colors_[u] > 2) throw precondition_error("colours must lie in {0,1,2}");
            for (int i = 0; i < dim_.d(); ++i) {
                Vertex v = u ^ (Vertex{1} << i);
                if (colors_[u] == colors_[v])
                    throw precondition_error("improper colouring at edge (" + bit_string(dim_, u) + "," +
                                             bit_string(dim_, v) + ")");
            }
        }
    }

    CubeDim dim() const { return dim_; }
    std::span<const std::uint8_t> colors() const { return colors_; }
    int operator[](Vertex v) const { return colors_[v]; }
    bool operator==(const ThreeColoring&) const = default;

private:
    CubeDim dim_;
    std::vector<std::uint8_t> colors_;
};

inline int mod3(int x) { return ((x % 3) + 3) % 3; }

inline ThreeColoring to_coloring(const HeightFunction& f) {
    if (!f.normalized()) throw precondition_error("to_coloring requires f(0) = 0");
    std::vector<std::uint8_t> c(f.dim().vertex_count());
    for (Vertex v = 0; v < c.size(); ++v) c[v] = static_cast<std::uint8_t>(mod3(f[v]));
    return ThreeColoring(f.dim(), std::move(c));
}

/// Unique height function with f(0) = 0 and f ≡ χ (mod 3).
inline HeightFunction lift_coloring(const ThreeColoring& chi) {
    const CubeDim dim = chi.dim();
    if (chi[0] != 0) throw precondition_error("lift_coloring requires chi(0) = 0");
    std::vector<int> f(dim.vertex_count(), 0);
    std::vector<bool> seen(dim.vertex_count(), false);
    std::deque<Vertex> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (int i = 0; i < dim.d(); ++i) {
            Vertex v = u ^ (Vertex{1} << i);
            if (seen[v]) continue;
            seen[v] = true;
            f[v] = f[u] + (mod3(chi[v] - chi[u]) == 1 ? 1 : -1);
            queue.push_back(v);
        }
    }
    return HeightFunction(dim, std::move(f));
}

// ---------------------------------------------------------------------------
// Level chains: the encoding of a function that vanishes on E \ A.

/// floor(d/2): the number of levels C_2 ⊇ C_4 ⊇ ... ⊇ C_{2⌊d/2⌋}.
inline int level_count(CubeDim dim) { return dim.d() / 2; }

struct LevelChain {
    CubeDim dim;
    VertexSet support;              // A = C_2, a subset of E
    std::vector<int> signs;         // ±1 per 2-component of A, in k_components order
    std::vector<VertexSet> levels;  // levels[i-1] = C_{2i}, i = 1..⌊d/2⌋
    // Free odd vertices that take the larger choice: +1 on O \ N(A), and
    // 2i+1 (rather than 2i-1) in absolute value on B(C_{2i}) \ N(C_{2i+2}).
    VertexSet odd_high;

    bool operator==(const LevelChain&) const = default;
};

namespace detail {

inline const VertexSet& level_or_empty(const std::vector<VertexSet>& levels, std::size_t i,
                                       const VertexSet& empty) {
    return i < levels.size() ? levels[i] : empty;
}

} // namespace detail

/// Odd vertices whose value is not forced by the even side of the chain.
inline VertexSet free_odd_vertices(CubeDim dim, const VertexSet& support, const std::vector<VertexSet>& levels) {
    VertexSet free = VertexSet::odds(dim) - neighborhood(support);
    const VertexSet empty(dim);
    for (std::size_t i = 0; i < levels.size(); ++i)
        free |= interior(levels[i]) - neighborhood(detail::level_or_empty(levels, i + 1, empty));
    return free;
}

/// Throws precondition_error naming the first violated condition.
inline void check_legitimate(const LevelChain& lc) {
    const CubeDim dim = lc.dim;
    const auto fail = [](const std::string& msg) { throw precondition_error("illegitimate chain: " + msg); };
    if (!lc.support.all_even()) fail("support must be even");
    if (lc.levels.size() != static_cast<std::size_t>(level_count(dim))) fail("wrong number of levels");
    if (lc.levels.empty() && !lc.support.empty()) fail("d = 1 admits only the empty support");
    if (!lc.levels.empty() && !(lc.levels[0] == lc.support)) fail("C_2 must equal the support");
    for (std::size_t i = 1; i < lc.levels.size(); ++i)
        if (!lc.levels[i].is_subset_of(lc.levels[i - 1]))
            fail("levels not nested at C_" + std::to_string(2 * (i + 1)));
    const VertexSet empty(dim);
    for (std::size_t i = 0; i < lc.levels.size(); ++i) {
        const VertexSet& next = detail::level_or_empty(lc.levels, i + 1, empty);
        VertexSet bad = neighborhood(next) - interior(lc.levels[i]);
        if (!bad.empty())
            fail("N(C_" + std::to_string(2 * (i + 2)) + ") not inside B(C_" + std::to_string(2 * (i + 1)) +
                 ") at level i=" + std::to_string(i + 1) + ", vertex " + bit_string(dim, bad.min()));
    }
    if (lc.signs.size() != component_count(lc.support)) fail("one sign per 2-component required");
    for (int s : lc.signs)
        if (s != 1 && s != -1) fail("signs must be +1 or -1");
    if (!lc.odd_high.is_subset_of(free_odd_vertices(dim, lc.support, lc.levels)))
        fail("odd choice on a forced vertex " + bit_string(dim, (lc.odd_high - free_odd_vertices(dim, lc.support, lc.levels)).min()));
}

inline HeightFunction chain_compose(const LevelChain& lc) {
    check_legitimate(lc);
    const CubeDim dim = lc.dim;
    std::vector<int> f(dim.vertex_count(), 0);
    const auto comps = k_components(lc.support, 2);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        comps[c].for_each([&](Vertex u) {
            int level = 0;
            while (static_cast<std::size_t>(level) < lc.levels.size() && lc.levels[static_cast<std::size_t>(level)].contains(u))
                ++level;
            f[u] = lc.signs[c] * 2 * level;
        });
    }
    VertexSet::odds(dim).for_each([&](Vertex v) {
        int lo = 1 << 30, hi = -1, sign = 1;
        for (int i = 0; i < dim.d(); ++i) {
            int x = f[v ^ (Vertex{1} << i)];
            if (x != 0) sign = x > 0 ? 1 : -1;
            lo = std::min(lo, std::abs(x));
            hi = std::max(hi, std::abs(x));
        }
        const bool high = lc.odd_high.contains(v);
        if (hi == 0)
            f[v] = high ? 1 : -1;
        else if (hi == lo)
            f[v] = sign * (high ? hi + 1 : hi - 1);
        else
            f[v] = sign * (lo + 1);
    });
    return HeightFunction(dim, std::move(f));
}

/// Inverse of chain_compose on functions vanishing on all of E but a small set.
inline LevelChain chain_decompose(const HeightFunction& f, const Config& cfg) {
    const CubeDim dim = f.dim();
    const int levels = level_count(dim);
    VertexSet support(dim);
    VertexSet::evens(dim).for_each([&](Vertex u) {
        if (f[u] != 0) support.insert(u);
        if (std::abs(f[u]) > 2 * levels)
            throw precondition_error("even value exceeds the chain depth 2*floor(d/2)");
    });
    if (!cfg.is_small(support.size(), dim.d()))
        throw precondition_error("chain_decompose: E \\ f^{-1}(0) is not small");
    LevelChain lc{dim, support, {}, {}, VertexSet(dim)};
    for (const auto& comp : k_components(support, 2)) lc.signs.push_back(f[comp.min()] > 0 ? 1 : -1);
    for (int i = 1; i <= levels; ++i) {
        VertexSet c(dim);
        support.for_each([&](Vertex u) {
            if (std::abs(f[u]) >= 2 * i) c.insert(u);
        });
        lc.levels.push_back(std::move(c));
    }
    const VertexSet nbhd = neighborhood(support);
    free_odd_vertices(dim, support, lc.levels).for_each([&](Vertex v) {
        if (!nbhd.contains(v)) {
            if (f[v] == 1) lc.odd_high.insert(v);
        } else {
            int level = std::abs(f[v ^ 1u]);
            if (std::abs(f[v]) == level + 1) lc.odd_high.insert(v);
        }
    });
    return lc;
}

enum class MostlyConstant { neither, even_side, odd_side, both };

inline std::string to_string(MostlyConstant m) {
    switch (m) {
    case MostlyConstant::neither: return "neither";
    case MostlyConstant::even_side: return "even-side";
    case MostlyConstant::odd_side: return "odd-side";
    case MostlyConstant::both: return "both";
    }
    return "?";
}

/// Whether f is constant off a small set on E, on O, or both.
inline MostlyConstant is_mostly_constant(const HeightFunction& f, const Config& cfg) {
    const CubeDim dim = f.dim();
    auto side = [&](int p) {
        std::map<int, std::size_t> freq;
        VertexSet::parity_class(dim, p).for_each([&](Vertex v) { ++freq[f[v]]; });
        std::size_t best = 0;
        for (const auto& [value, n] : freq) best = std::max(best, n);
        return cfg.is_small(dim.M() - best, dim.d());
    };
    const bool e = side(0), o = side(1);
    if (e && o) return MostlyConstant::both;
    if (e) return MostlyConstant::even_side;
    if (o) return MostlyConstant::odd_side;
    return MostlyConstant::neither;
}

// ---------------------------------------------------------------------------
// Flat serialization: whitespace-separated integers in vertex-index order.

template <class Seq>
std::string to_flat(const Seq& values) {
    std::string out;
    bool first = true;
    for (auto v : values) {
        if (!first) out += ' ';
        out += std::to_string(static_cast<int>(v));
        first = false;
    }
    return out;
}

inline std::string to_flat(const HeightFunction& f) { return to_flat(f.values()); }
inline std::string to_flat(const RankFunction& g) { return to_flat(g.values()); }
inline std::string to_flat(const ThreeColoring& c) { return to_flat(c.colors()); }

inline std::vector<int> parse_flat(const std::string& line) {
    std::vector<int> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw precondition_error("bad integer in flat array: " + tok);
        out.push_back(v);
    }
    return out;
}

inline HeightFunction parse_height_function(CubeDim dim, const std::string& line) {
    return HeightFunction(dim, parse_flat(line));
}

} // namespace hcube
