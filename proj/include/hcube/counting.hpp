#pragma once

// Exact counting of normalized homomorphisms Q_d -> Z by several
// independent engines, plus the explicit range-4 and range-5 families.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "hcube/config.hpp"
#include "hcube/cube.hpp"
#include "hcube/homomorphism.hpp"

namespace hcube {

using u128 = unsigned __int128;

inline BigInt to_bigint(u128 x) {
    BigInt r = static_cast<std::uint64_t>(x >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(x);
    return r;
}

/// Vertices sorted by Hamming weight, then by index (BFS layers from 0).
inline std::vector<Vertex> weight_order(CubeDim dim) {
    std::vector<Vertex> order(dim.vertex_count());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(),
                     [](Vertex a, Vertex b) { return std::popcount(a) < std::popcount(b); });
    return order;
}

namespace detail {

struct ColoringSearch {
    CubeDim dim;
    std::vector<std::uint8_t> color;

    // Vertices are coloured in index order; lower neighbours have one bit cleared.
    std::uint64_t run(Vertex v) {
        if (v == dim.vertex_count()) return 1;
        std::uint64_t total = 0;
        for (std::uint8_t c = 0; c < 3; ++c) {
            bool ok = true;
            for (int i = 0; i < dim.d() && ok; ++i) {
                Vertex bit = Vertex{1} << i;
                if (v & bit) ok = color[v ^ bit] != c;
            }
            if (!ok) continue;
            color[v] = c;
            total += run(v + 1);
        }
        return total;
    }
};

} // namespace detail

/// |F| by enumerating proper 3-colourings with χ(0) = 0 (d ≤ 4).
inline BigInt count_brute(CubeDim dim, unsigned jobs = 1) {
    if (dim.d() > 4) throw budget_error("count_brute: engine budget exceeded (d <= 4)");
    if (dim.d() == 1) return 2;
    // Partition on the colours of vertices 1 and 2 (both adjacent to 0).
    std::vector<std::future<std::uint64_t>> parts;
    std::uint64_t serial = 0;
    for (std::uint8_t c1 = 1; c1 < 3; ++c1)
        for (std::uint8_t c2 = 1; c2 < 3; ++c2) {
            auto task = [dim, c1, c2] {
                detail::ColoringSearch s{dim, std::vector<std::uint8_t>(dim.vertex_count(), 0)};
                s.color[1] = c1;
                s.color[2] = c2;
                return s.run(3);
            };
            if (jobs > 1)
                parts.push_back(std::async(std::launch::async, task));
            else
                serial += task();
        }
    for (auto& p : parts) serial += p.get();
    return serial;
}

/// All proper 3-colourings of Q_d, no rooting (d ≤ 3).
inline BigInt count_colorings_unrestricted(CubeDim dim) {
    if (dim.d() > 3) throw budget_error("count_colorings_unrestricted: engine budget exceeded (d <= 3)");
    detail::ColoringSearch s{dim, std::vector<std::uint8_t>(dim.vertex_count(), 0)};
    return s.run(0);
}

/// |F| via frontier dynamic programming over 3-colourings in weight order.
inline BigInt count_dp(CubeDim dim, std::size_t memory_budget_mb = 2048) {
    const auto order = weight_order(dim);
    const std::size_t n = order.size();
    std::vector<std::size_t> pos(n), last_use(n);
    for (std::size_t t = 0; t < n; ++t) pos[order[t]] = t;
    for (Vertex v = 0; v < n; ++v) {
        last_use[v] = pos[v];
        for (int i = 0; i < dim.d(); ++i) last_use[v] = std::max(last_use[v], pos[v ^ (Vertex{1} << i)]);
    }

    std::size_t width = 0;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t live = 0;
        for (std::size_t s = 0; s <= t; ++s) live += last_use[order[s]] > t;
        width = std::max(width, live + 1);
    }
    if (width > 32)
        throw budget_error("count_dp: frontier width " + std::to_string(width) + " needs about 3*2^" +
                           std::to_string(width - 1) + " states");

    const std::size_t max_states = memory_budget_mb * (std::size_t{1} << 20) / 64;
    std::vector<Vertex> frontier{order[0]};
    std::unordered_map<std::uint64_t, u128> states{{0, 1}};  // χ(0) = 0

    for (std::size_t t = 1; t < n; ++t) {
        const Vertex v = order[t];
        std::vector<int> nbr_slots;
        for (std::size_t s = 0; s < frontier.size(); ++s)
            if ((std::popcount(frontier[s] ^ v)) == 1) nbr_slots.push_back(static_cast<int>(s));
        std::vector<int> keep;
        std::vector<Vertex> next_frontier;
        for (std::size_t s = 0; s < frontier.size(); ++s)
            if (last_use[frontier[s]] > t) {
                keep.push_back(static_cast<int>(s));
                next_frontier.push_back(frontier[s]);
            }
        const bool keep_v = last_use[v] > t;
        if (keep_v) next_frontier.push_back(v);

        std::unordered_map<std::uint64_t, u128> next;
        next.reserve(states.size() * 2);
        for (const auto& [key, count] : states) {
            unsigned used = 0;
            for (int s : nbr_slots) used |= 1u << (key >> (2 * s) & 3u);
            std::uint64_t base = 0;
            for (std::size_t j = 0; j < keep.size(); ++j)
                base |= (key >> (2 * keep[j]) & 3u) << (2 * j);
            for (std::uint64_t c = 0; c < 3; ++c) {
                if (used >> c & 1u) continue;
                std::uint64_t k = keep_v ? base | (c << (2 * keep.size())) : base;
                next[k] += count;
            }
        }
        if (next.size() > max_states)
            throw budget_error("count_dp: " + std::to_string(next.size()) + " states exceed memory budget");
        states = std::move(next);
        frontier = std::move(next_frontier);
    }
    u128 total = 0;
    for (const auto& [key, count] : states) total += count;
    return to_bigint(total);
}

namespace detail {

// Backtracking over normalized height functions in weight order. All lower
// neighbours of a vertex (one bit cleared) precede it.
template <class Visitor>
struct HeightSearch {
    CubeDim dim;
    std::vector<Vertex> order;
    std::vector<int> f;
    Visitor& visit;

    void run(std::size_t t, int lo, int hi) {
        if (t == order.size()) {
            visit(f, lo, hi);
            return;
        }
        const Vertex v = order[t];
        const int first = f[v & (v - 1)];  // clear lowest set bit
        for (int x : {first - 1, first + 1}) {
            bool ok = true;
            for (int i = 0; i < dim.d() && ok; ++i) {
                Vertex bit = Vertex{1} << i;
                if (v & bit) ok = std::abs(f[v ^ bit] - x) == 1;
            }
            if (!ok) continue;
            f[v] = x;
            run(t + 1, std::min(lo, x), std::max(hi, x));
        }
    }
};

} // namespace detail

/// Visits each f ∈ F once as (values, min, max); d ≤ 5.
template <class Visitor>
void for_each_normalized_height(CubeDim dim, Visitor&& visit) {
    if (dim.d() > 5) throw budget_error("enumeration of F: engine budget exceeded (d <= 5)");
    detail::HeightSearch<std::remove_reference_t<Visitor>> s{dim, weight_order(dim),
                                                             std::vector<int>(dim.vertex_count(), 0), visit};
    s.run(1, 0, 0);
}

struct RangeTable {
    int d = 0;
    std::map<int, BigInt> counts;  // |R(f)| -> |F_i|
    BigInt total = 0;
    std::string engine;
    double seconds = 0.0;
};

inline RangeTable count_by_range(CubeDim dim) {
    const auto start = std::chrono::steady_clock::now();
    std::map<int, std::uint64_t> raw;
    std::uint64_t total = 0;
    for_each_normalized_height(dim, [&](const std::vector<int>&, int lo, int hi) {
        ++raw[hi - lo + 1];
        ++total;
    });
    RangeTable table;
    table.d = dim.d();
    const int widest = raw.empty() ? 1 : raw.rbegin()->first;
    for (int i = 1; i <= widest; ++i) table.counts[i] = raw.count(i) ? raw[i] : 0;
    table.total = total;
    table.engine = "backtrack";
    table.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return table;
}

/// Rank functions on 2^[d] by level-by-level backtracking (d ≤ 4).
inline BigInt count_rank_functions(CubeDim dim) {
    if (dim.d() > 4) throw budget_error("count_rank_functions: engine budget exceeded (d <= 4)");
    const auto order = weight_order(dim);
    std::vector<int> g(dim.vertex_count(), 0);
    std::uint64_t total = 0;
    auto rec = [&](auto& self, std::size_t t) -> void {
        if (t == order.size()) {
            ++total;
            return;
        }
        const Vertex a = order[t];
        int lo = 0, hi = 1 << 20;
        for (int i = 0; i < dim.d(); ++i) {
            Vertex x = Vertex{1} << i;
            if (!(a & x)) continue;
            lo = std::max(lo, g[a ^ x]);
            hi = std::min(hi, g[a ^ x] + 1);
        }
        for (int val = lo; val <= hi; ++val) {
            g[a] = val;
            self(self, t + 1);
        }
    };
    rec(rec, 1);
    return total;
}

// ---------------------------------------------------------------------------
// Explicit families vanishing on E \ A with values ±2 on a sparse A.

namespace detail {

inline void check_family_support(CubeDim dim, const VertexSet& a, std::size_t min_size) {
    if (!(a.dim() == dim)) throw precondition_error("vertex set dimension mismatch");
    if (!a.all_even()) throw precondition_error("family support must be a subset of E");
    if (a.size() < min_size) throw precondition_error("family support too small");
    if (!is_sparse(a)) throw precondition_error("family support must be sparse");
}

// Each member: f = signs on A (×2), 0 on E \ A, forced sign on N(A), free ±1 elsewhere.
template <class SignFilter>
std::vector<HeightFunction> build_family(CubeDim dim, const VertexSet& a, SignFilter accept_signs) {
    const auto members = a.members();
    const auto free = (VertexSet::odds(dim) - neighborhood(a)).members();
    if (free.size() > 22 || members.size() > 22) throw budget_error("family too large to materialize");
    std::vector<HeightFunction> out;
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << members.size()); ++signs) {
        if (!accept_signs(signs, members.size())) continue;
        std::vector<int> base(dim.vertex_count(), 0);
        for (std::size_t j = 0; j < members.size(); ++j) {
            const int s = (signs >> j & 1u) ? -1 : 1;
            base[members[j]] = 2 * s;
            for (int i = 0; i < dim.d(); ++i) base[members[j] ^ (Vertex{1} << i)] = s;
        }
        for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << free.size()); ++choice) {
            std::vector<int> f = base;
            for (std::size_t j = 0; j < free.size(); ++j) f[free[j]] = (choice >> j & 1u) ? -1 : 1;
            out.emplace_back(dim, std::move(f));
        }
    }
    return out;
}

} // namespace detail

/// Values ±2 on A with both signs present.
inline std::vector<HeightFunction> build_family_5(CubeDim dim, const VertexSet& a) {
    detail::check_family_support(dim, a, 2);
    return detail::build_family(dim, a, [](std::uint64_t signs, std::size_t k) {
        return signs != 0 && signs != (std::uint64_t{1} << k) - 1;
    });
}

/// One common value, +2 or -2, on all of A.
inline std::vector<HeightFunction> build_family_4(CubeDim dim, const VertexSet& a) {
    detail::check_family_support(dim, a, 1);
    return detail::build_family(dim, a, [](std::uint64_t signs, std::size_t k) {
        return signs == 0 || signs == (std::uint64_t{1} << k) - 1;
    });
}

/// (2^k - 2) 2^(M - dk)
inline BigInt family_5_size(CubeDim dim, std::size_t k) {
    return ((BigInt(1) << k) - 2) << (dim.M() - static_cast<std::size_t>(dim.d()) * k);
}

/// 2^(1 + M - dk)
inline BigInt family_4_size(CubeDim dim, std::size_t k) {
    return BigInt(1) << (1 + dim.M() - static_cast<std::size_t>(dim.d()) * k);
}

// ---------------------------------------------------------------------------

struct AsymptoticConstants {
    static long double e() { return std::exp(1.0L); }
    static long double total() { return 2.0L * e(); }
    static long double range3() { return 2.0L; }
    static long double range4() { return 4.0L * std::sqrt(e()) - 4.0L; }
    static long double range5() { return 2.0L * e() - 4.0L * std::sqrt(e()) + 2.0L; }
};

struct AsymptoticReport {
    int d = 0;
    long double ratio_total = 0, ratio3 = 0, ratio4 = 0, ratio5 = 0;
    long double ref_total = AsymptoticConstants::total();
    long double ref3 = AsymptoticConstants::range3();
    long double ref4 = AsymptoticConstants::range4();
    long double ref5 = AsymptoticConstants::range5();
    long double share_at_most_5 = 0;  // |F_{≤5}| / |F|

    long double deviation_total() const { return ratio_total - ref_total; }
    long double deviation3() const { return ratio3 - ref3; }
    long double deviation4() const { return ratio4 - ref4; }
    long double deviation5() const { return ratio5 - ref5; }
};

inline AsymptoticReport asymptotic_report(const RangeTable& table) {
    const CubeDim dim(table.d);
    const long double scale = std::ldexp(1.0L, static_cast<int>(dim.M()));
    auto count = [&](int i) -> long double {
        auto it = table.counts.find(i);
        return it == table.counts.end() ? 0.0L : it->second.convert_to<long double>();
    };
    AsymptoticReport rep;
    rep.d = table.d;
    const long double total = table.total.convert_to<long double>();
    rep.ratio_total = total / scale;
    rep.ratio3 = count(3) / scale;
    rep.ratio4 = count(4) / scale;
    rep.ratio5 = count(5) / scale;
    long double upto5 = 0;
    for (int i = 1; i <= 5; ++i) upto5 += count(i);
    rep.share_at_most_5 = total > 0 ? upto5 / total : 0;
    return rep;
}

} // namespace hcube
