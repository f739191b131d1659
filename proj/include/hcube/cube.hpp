#pragma once

// Hamming cube topology on packed vertex sets.
//
// A vertex of Q_d is an integer in [0, 2^d); bit i of the index is
// coordinate i. Sets are bitsets over vertex indices, one bit per vertex,
// so N(A) and B(A) reduce to d word-parallel bit permutations.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "hcube/config.hpp"

namespace hcube {

using Vertex = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr int max_dimension = 24;

class CubeDim {
public:
    constexpr CubeDim() = default;
    explicit constexpr CubeDim(int d) : d_(d) {
        if (d < 1 || d > max_dimension)
            throw precondition_error("cube dimension must lie in [1, 24]");
    }

    constexpr int d() const { return d_; }
    /// Size of each parity class, 2^(d-1).
    constexpr std::size_t M() const { return std::size_t{1} << (d_ - 1); }
    constexpr std::size_t vertex_count() const { return std::size_t{1} << d_; }
    constexpr bool contains(Vertex v) const { return v < vertex_count(); }

    constexpr bool operator==(const CubeDim&) const = default;

private:
    int d_ = 1;
};

inline constexpr int parity(Vertex v) { return std::popcount(v) & 1; }
inline constexpr bool is_even(Vertex v) { return parity(v) == 0; }

inline int distance(CubeDim dim, Vertex u, Vertex v) {
    if (!dim.contains(u) || !dim.contains(v))
        throw precondition_error("vertex out of range for dimension");
    return std::popcount(u ^ v);
}

/// d-bit string, most significant coordinate first.
inline std::string bit_string(CubeDim dim, Vertex v) {
    std::string s(static_cast<std::size_t>(dim.d()), '0');
    for (int i = 0; i < dim.d(); ++i)
        if (v >> i & 1u) s[static_cast<std::size_t>(dim.d() - 1 - i)] = '1';
    return s;
}

inline Vertex parse_vertex(CubeDim dim, const std::string& bits) {
    if (bits.size() != static_cast<std::size_t>(dim.d()))
        throw precondition_error("bit string length differs from dimension: " + bits);
    Vertex v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw precondition_error("bad bit string: " + bits);
        v = (v << 1) | static_cast<Vertex>(c - '0');
    }
    return v;
}

namespace detail {

// Positions k in a 64-bit word whose bit i is 0.
inline constexpr std::array<std::uint64_t, 6> low_half = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};

inline constexpr std::uint64_t even_positions = [] {
    std::uint64_t m = 0;
    for (unsigned k = 0; k < 64; ++k)
        if (std::popcount(k) % 2 == 0) m |= std::uint64_t{1} << k;
    return m;
}();

} // namespace detail

class VertexSet {
public:
    using Words = boost::container::small_vector<std::uint64_t, 1>;

    VertexSet() = default;
    explicit VertexSet(CubeDim dim) : dim_(dim), words_(word_count(dim), 0) {}
    VertexSet(CubeDim dim, std::initializer_list<Vertex> members) : VertexSet(dim) {
        for (Vertex v : members) insert(v);
    }
    template <class Range>
    static VertexSet from_range(CubeDim dim, const Range& members) {
        VertexSet s(dim);
        for (Vertex v : members) s.insert(v);
        return s;
    }
    /// For d <= 6: bit k of mask is vertex k.
    static VertexSet from_mask(CubeDim dim, std::uint64_t mask) {
        if (dim.d() > 6) throw precondition_error("from_mask requires d <= 6");
        VertexSet s(dim);
        s.words_[0] = mask & s.tail_mask();
        return s;
    }
    static VertexSet full(CubeDim dim) {
        VertexSet s(dim);
        for (auto& w : s.words_) w = ~std::uint64_t{0};
        s.words_.back() &= s.tail_mask();
        return s;
    }
    static VertexSet evens(CubeDim dim) { return parity_class(dim, 0); }
    static VertexSet odds(CubeDim dim) { return parity_class(dim, 1); }
    static VertexSet parity_class(CubeDim dim, int p) {
        VertexSet s(dim);
        for (std::size_t j = 0; j < s.words_.size(); ++j) {
            bool flip = (std::popcount(j) & 1) != p;
            s.words_[j] = flip ? ~detail::even_positions : detail::even_positions;
        }
        s.words_.back() &= s.tail_mask();
        return s;
    }

    CubeDim dim() const { return dim_; }
    const Words& words() const { return words_; }
    std::uint64_t mask() const {
        if (dim_.d() > 6) throw precondition_error("mask requires d <= 6");
        return words_[0];
    }

    bool contains(Vertex v) const {
        return dim_.contains(v) && (words_[v >> 6] >> (v & 63) & 1u);
    }
    void insert(Vertex v) {
        check_vertex(v);
        words_[v >> 6] |= std::uint64_t{1} << (v & 63);
    }
    void erase(Vertex v) {
        check_vertex(v);
        words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
    }

    /// Smallest member; precondition: nonempty.
    Vertex min() const {
        for (std::size_t j = 0; j < words_.size(); ++j)
            if (words_[j]) return static_cast<Vertex>(64 * j + std::countr_zero(words_[j]));
        throw precondition_error("min of empty vertex set");
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t j = 0; j < words_.size(); ++j) {
            std::uint64_t w = words_[j];
            while (w) {
                f(static_cast<Vertex>(64 * j + std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<Vertex> members() const {
        std::vector<Vertex> out;
        out.reserve(size());
        for_each([&](Vertex v) { out.push_back(v); });
        return out;
    }

    bool single_parity(int p) const { return is_subset_of(parity_class(dim_, p)); }
    bool all_even() const { return single_parity(0); }
    bool all_odd() const { return single_parity(1); }

    VertexSet& operator|=(const VertexSet& o) { return apply(o, [](auto& a, auto b) { a |= b; }); }
    VertexSet& operator&=(const VertexSet& o) { return apply(o, [](auto& a, auto b) { a &= b; }); }
    VertexSet& operator-=(const VertexSet& o) { return apply(o, [](auto& a, auto b) { a &= ~b; }); }
    VertexSet& operator^=(const VertexSet& o) { return apply(o, [](auto& a, auto b) { a ^= b; }); }

    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
    friend VertexSet operator^(VertexSet a, const VertexSet& b) { return a ^= b; }

    bool is_subset_of(const VertexSet& o) const {
        check_same(o);
        for (std::size_t j = 0; j < words_.size(); ++j)
            if (words_[j] & ~o.words_[j]) return false;
        return true;
    }
    bool intersects(const VertexSet& o) const {
        check_same(o);
        for (std::size_t j = 0; j < words_.size(); ++j)
            if (words_[j] & o.words_[j]) return true;
        return false;
    }

    bool operator==(const VertexSet& o) const { return dim_ == o.dim_ && words_ == o.words_; }

    /// Lexicographic order on the ascending member lists.
    std::strong_ordering operator<=>(const VertexSet& o) const {
        if (auto c = dim_.d() <=> o.dim_.d(); c != 0) return c;
        for (std::size_t j = 0; j < words_.size(); ++j) {
            std::uint64_t a = words_[j], b = o.words_[j];
            if (a == b) continue;
            std::uint64_t diff = a ^ b;
            std::uint64_t low = diff & (~diff + 1);
            // The first differing vertex belongs to one set only; that set is
            // smaller unless the other one has no members past it.
            bool a_has = (a & low) != 0;
            bool other_more = a_has ? o.has_member_from(j, low) : has_member_from(j, low);
            if (a_has) return other_more ? std::strong_ordering::less : std::strong_ordering::greater;
            return other_more ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        return std::strong_ordering::equal;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for_each([&](Vertex v) {
            if (!first) s += ',';
            s += bit_string(dim_, v);
            first = false;
        });
        return s + "}";
    }

    // Word-level image under v -> v XOR 2^i.
    VertexSet flipped(int i) const {
        VertexSet out(dim_);
        if (i < 6) {
            const unsigned s = 1u << i;
            const std::uint64_t lo = detail::low_half[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < words_.size(); ++j) {
                std::uint64_t w = words_[j];
                out.words_[j] = ((w & lo) << s) | ((w >> s) & lo);
            }
        } else {
            const std::size_t stride = std::size_t{1} << (i - 6);
            for (std::size_t j = 0; j < words_.size(); ++j) out.words_[j ^ stride] = words_[j];
        }
        return out;
    }

private:
    static std::size_t word_count(CubeDim dim) { return (dim.vertex_count() + 63) / 64; }
    std::uint64_t tail_mask() const {
        return dim_.d() >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim_.vertex_count()) - 1;
    }
    void check_vertex(Vertex v) const {
        if (!dim_.contains(v)) throw precondition_error("vertex out of range for dimension");
    }
    void check_same(const VertexSet& o) const {
        if (!(dim_ == o.dim_)) throw precondition_error("vertex set dimension mismatch");
    }
    template <class Op>
    VertexSet& apply(const VertexSet& o, Op op) {
        check_same(o);
        for (std::size_t j = 0; j < words_.size(); ++j) op(words_[j], o.words_[j]);
        return *this;
    }
    // Any member at or after bit `low` of word j, excluding the bit itself.
    bool has_member_from(std::size_t j, std::uint64_t low) const {
        std::uint64_t above = ~(low | (low - 1));
        if (words_[j] & above) return true;
        for (std::size_t k = j + 1; k < words_.size(); ++k)
            if (words_[k]) return true;
        return false;
    }

    CubeDim dim_{};
    Words words_ = Words(1, 0);
};

/// N(A): union of the neighbourhoods of the members of A.
inline VertexSet neighborhood(const VertexSet& a) {
    VertexSet out(a.dim());
    for (int i = 0; i < a.dim().d(); ++i) out |= a.flipped(i);
    return out;
}

inline VertexSet neighborhood(CubeDim dim, Vertex v) { return neighborhood(VertexSet(dim, {v})); }

inline VertexSet neighborhood(CubeDim dim, const VertexSet& a) {
    if (!(a.dim() == dim)) throw precondition_error("vertex set dimension mismatch");
    return neighborhood(a);
}

/// B(A) = {v : N(v) ⊆ A}.
inline VertexSet interior(const VertexSet& a) {
    VertexSet out = VertexSet::full(a.dim());
    for (int i = 0; i < a.dim().d(); ++i) out &= a.flipped(i);
    return out;
}

inline VertexSet interior(CubeDim dim, const VertexSet& a) {
    if (!(a.dim() == dim)) throw precondition_error("vertex set dimension mismatch");
    return interior(a);
}

/// d_C(v) = |N(v) ∩ C|.
inline int degree_into(Vertex v, const VertexSet& c) {
    int n = 0;
    for (int i = 0; i < c.dim().d(); ++i)
        if (c.contains(v ^ (Vertex{1} << i))) ++n;
    return n;
}

/// [A] = {u of A's parity : N(u) ⊆ N(A)}.
inline VertexSet closure(const VertexSet& a) {
    if (a.empty()) return a;
    const int p = parity(a.min());
    return interior(neighborhood(a)) & VertexSet::parity_class(a.dim(), p);
}

struct Edge {
    Vertex u;
    Vertex v;
    bool operator==(const Edge&) const = default;
};

struct EdgeCut {
    std::size_t count = 0;
    std::vector<Edge> edges;  // u < v, ascending
};

/// ∇(A), or ∇(A, C) when C is given (A and C disjoint).
inline EdgeCut boundary_edges(const VertexSet& a, const std::optional<VertexSet>& c = std::nullopt) {
    if (c && a.intersects(*c)) throw precondition_error("boundary_edges: A and C overlap");
    EdgeCut cut;
    const CubeDim dim = a.dim();
    for (Vertex u = 0; u < dim.vertex_count(); ++u) {
        for (int i = 0; i < dim.d(); ++i) {
            Vertex v = u ^ (Vertex{1} << i);
            if (v < u) continue;
            bool crosses = c ? ((a.contains(u) && c->contains(v)) || (a.contains(v) && c->contains(u)))
                             : (a.contains(u) != a.contains(v));
            if (crosses) cut.edges.push_back({u, v});
        }
    }
    cut.count = cut.edges.size();
    return cut;
}

inline int set_distance(const VertexSet& a, const VertexSet& c) {
    if (a.empty() || c.empty()) throw precondition_error("set_distance of empty set");
    if (!(a.dim() == c.dim())) throw precondition_error("vertex set dimension mismatch");
    int best = a.dim().d() + 1;
    a.for_each([&](Vertex u) { c.for_each([&](Vertex v) { best = std::min(best, std::popcount(u ^ v)); }); });
    return best;
}

/// All vertices within distance k of some member of S.
inline VertexSet ball_around(const VertexSet& s, int k) {
    VertexSet out = s;
    for (int step = 0; step < k; ++step) out |= neighborhood(out);
    return out;
}

/// Maximal k-linked subsets of A, ordered by smallest member.
inline std::vector<VertexSet> k_components(const VertexSet& a, int k) {
    if (k < 1) throw precondition_error("k_components requires k >= 1");
    std::vector<VertexSet> comps;
    VertexSet rest = a;
    while (!rest.empty()) {
        VertexSet comp(a.dim(), {rest.min()});
        for (;;) {
            VertexSet grown = ball_around(comp, k) & rest;
            if (grown == comp) break;
            comp = std::move(grown);
        }
        rest -= comp;
        comps.push_back(std::move(comp));
    }
    return comps;
}

inline std::size_t component_count(const VertexSet& a) { return k_components(a, 2).size(); }

inline bool is_klinked(const VertexSet& a, int k) { return k_components(a, k).size() <= 1; }

/// Every 2-component is a singleton.
inline bool is_sparse(const VertexSet& a) {
    for (const auto& c : k_components(a, 2))
        if (c.size() != 1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// k-linked set enumeration

/// Degree of the distance-≤k graph restricted to one parity class.
inline std::size_t same_parity_degree(CubeDim dim, int k) {
    std::size_t deg = 0;
    for (int j = 2; j <= std::min(k, dim.d()); j += 2) {
        BigInt c = 1;
        for (int t = 0; t < j; ++t) c = c * (dim.d() - t) / (t + 1);
        deg += c.convert_to<std::size_t>();
    }
    return deg;
}

inline BigInt binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    BigInt c = 1;
    for (std::size_t t = 0; t < k; ++t) c = c * (n - t) / (t + 1);
    return c;
}

/// Rooted subtrees with n vertices of the infinite Δ-branching tree.
inline BigInt rooted_tree_bound(std::size_t delta, std::size_t n) {
    return binomial(delta * n, n) / ((delta - 1) * n + 1);
}

enum class RootMode {
    contains,  // every k-linked set containing the root
    minimum,   // only sets whose smallest member is the root
};

namespace detail {

template <class Visitor>
void grow_linked(const VertexSet& current, VertexSet candidates, VertexSet forbidden, int k,
                 std::size_t min_size, std::size_t max_size, const VertexSet& universe, Visitor& visit) {
    if (current.size() >= min_size) visit(current);
    if (current.size() == max_size) return;
    while (!candidates.empty()) {
        Vertex w = candidates.min();
        candidates.erase(w);
        VertexSet next = current;
        next.insert(w);
        VertexSet reach = ball_around(VertexSet(current.dim(), {w}), k) & universe;
        VertexSet next_candidates = candidates | (reach - next - forbidden);
        grow_linked(next, next_candidates, forbidden, k, min_size, max_size, universe, visit);
        forbidden.insert(w);
    }
}

} // namespace detail

/// Visits each k-linked subset of the root's parity class with size in
/// [min_size, max_size] containing `root` exactly once.
template <class Visitor>
void for_each_klinked(CubeDim dim, int k, std::size_t min_size, std::size_t max_size, Vertex root,
                      RootMode mode, Visitor&& visit) {
    if (k < 1) throw precondition_error("k must be >= 1");
    if (!dim.contains(root)) throw precondition_error("root out of range");
    VertexSet universe = VertexSet::parity_class(dim, parity(root));
    if (mode == RootMode::minimum) {
        for (Vertex v = 0; v < root; ++v) universe.erase(v);
    }
    VertexSet start(dim, {root});
    VertexSet candidates = (ball_around(start, k) & universe) - start;
    detail::grow_linked(start, candidates, VertexSet(dim), k, std::max<std::size_t>(min_size, 1),
                        max_size, universe, visit);
}

/// log2 of the smaller of the rooted-tree bound and C(|class|-1, n-1).
inline double klinked_log2_estimate(CubeDim dim, int k, std::size_t n) {
    const std::size_t delta = std::max<std::size_t>(same_parity_degree(dim, k), 2);
    BigInt tree = rooted_tree_bound(delta, n);
    BigInt sub = binomial(dim.M() - 1, n - 1);
    BigInt best = tree < sub ? tree : sub;
    return best <= 1 ? 0.0 : std::log2(best.convert_to<double>());
}

/// The k-linked sets of size n containing `root` within its parity class.
inline std::vector<VertexSet> enumerate_klinked(CubeDim dim, int k, std::size_t n, Vertex root,
                                                double log2_budget = 26.0) {
    if (n < 1) throw precondition_error("enumerate_klinked requires n >= 1");
    if (n > dim.M()) return {};
    if (klinked_log2_estimate(dim, k, n) > log2_budget)
        throw budget_error("enumerate_klinked: estimated output exceeds budget");
    std::vector<VertexSet> out;
    for_each_klinked(dim, k, n, n, root, RootMode::contains, [&](const VertexSet& s) { out.push_back(s); });
    return out;
}

/// Every k-linked set of the given parity with size in [min_size, max_size], each once.
template <class Visitor>
void for_each_klinked_in_class(CubeDim dim, int p, int k, std::size_t min_size, std::size_t max_size,
                               Visitor&& visit) {
    VertexSet cls = VertexSet::parity_class(dim, p);
    cls.for_each([&](Vertex root) { for_each_klinked(dim, k, min_size, max_size, root, RootMode::minimum, visit); });
}

// ---------------------------------------------------------------------------
// Hamming balls restricted to one parity class

enum class BallMode { exhaustive, greedy };

template <class Visitor>
void for_each_combination(const std::vector<Vertex>& pool, std::size_t r, Visitor&& visit) {
    if (r > pool.size()) return;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    std::vector<Vertex> pick(r);
    for (;;) {
        for (std::size_t i = 0; i < r; ++i) pick[i] = pool[idx[i]];
        visit(pick);
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == pool.size() - r + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// Even-class Hamming balls of exactly `size` vertices centred at `center`:
/// the largest full ball fitting inside `size` plus each completion drawn
/// from the next even sphere (only the lexicographically first in greedy mode).
template <class Visitor>
void for_each_even_ball(CubeDim dim, Vertex center, std::size_t size, BallMode mode, Visitor&& visit,
                        int side = 0) {
    if (!dim.contains(center)) throw precondition_error("center out of range");
    if (size > dim.M()) throw precondition_error("ball size exceeds parity class size");
    std::vector<std::vector<Vertex>> spheres(static_cast<std::size_t>(dim.d()) + 1);
    for (Vertex v = 0; v < dim.vertex_count(); ++v)
        if (parity(v) == side) spheres[static_cast<std::size_t>(std::popcount(v ^ center))].push_back(v);
    VertexSet ball(dim);
    std::size_t r = 0;
    while (r < spheres.size() && ball.size() + spheres[r].size() <= size) {
        for (Vertex v : spheres[r]) ball.insert(v);
        ++r;
    }
    std::size_t remaining = size - ball.size();
    if (remaining == 0) {
        visit(ball);
        return;
    }
    while (spheres[r].empty()) ++r;
    bool stop = false;
    for_each_combination(spheres[r], remaining, [&](const std::vector<Vertex>& pick) {
        if (stop) return;
        VertexSet b = ball;
        for (Vertex v : pick) b.insert(v);
        visit(b);
        if (mode == BallMode::greedy) stop = true;
    });
}

inline std::vector<VertexSet> even_hamming_balls(CubeDim dim, Vertex center, std::size_t size,
                                                 BallMode mode = BallMode::exhaustive) {
    std::vector<VertexSet> out;
    for_each_even_ball(dim, center, size, mode, [&](const VertexSet& b) { out.push_back(b); });
    return out;
}

/// All subsets of a d ≤ 6 parity class as masks, via subset iteration.
template <class Visitor>
void for_each_subset_of(const VertexSet& pool, Visitor&& visit) {
    const std::vector<Vertex> m = pool.members();
    if (m.size() > 32) throw budget_error("subset enumeration over more than 32 vertices");
    const std::uint64_t total = std::uint64_t{1} << m.size();
    VertexSet s(pool.dim());
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        s = VertexSet(pool.dim());
        for (std::size_t i = 0; i < m.size(); ++i)
            if (bits >> i & 1u) s.insert(m[i]);
        visit(s);
    }
}

} // namespace hcube
