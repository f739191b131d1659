#pragma once

// Exact dyadic weight sums over subsets of E, the count of functions that
// vanish off a given even support, and isoperimetric checks.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "hcube/config.hpp"
#include "hcube/cube.hpp"
#include "hcube/dyadic.hpp"
#include "hcube/homomorphism.hpp"

namespace hcube {

using WeightFn = std::function<Dyadic(const VertexSet&)>;

namespace detail {

inline void require_even(const VertexSet& a, const char* what) {
    if (!a.all_even()) throw precondition_error(std::string(what) + ": set must be a subset of E");
}

inline Dyadic boundary_weight(const VertexSet& c) {
    const long long n = static_cast<long long>(neighborhood(c).size());
    const long long b = static_cast<long long>(interior(c).size());
    return Dyadic::pow2(b - n);
}

// Σ over legitimate continuations C_{2i+2} ⊆ ... of Π 2^{-|N(C)|+|B(C)|}.
// A next level C is legitimate after `prev` iff N(C) ⊆ B(prev), i.e.
// C ⊆ B(B(prev)), which already lies inside prev.
inline Dyadic chain_sum(const VertexSet& prev, int remaining) {
    if (remaining == 0) return 1;
    const VertexSet room = interior(interior(prev));
    if (room.size() > 24) throw budget_error("h_weight: chain level with more than 24 candidate vertices");
    Dyadic total = 0;
    for_each_subset_of(room, [&](const VertexSet& c) { total += boundary_weight(c) * chain_sum(c, remaining - 1); });
    return total;
}

} // namespace detail

/// g(A) = 2^{-|N(A)|+|B(A)|}.
inline Dyadic g_weight(const VertexSet& a) {
    detail::require_even(a, "g_weight");
    return detail::boundary_weight(a);
}

/// h(A) = 2^{c(A)} g(A) Σ_chains Π_{i≥2} g(C_{2i}).
inline Dyadic h_weight(const VertexSet& a, const Config& cfg) {
    detail::require_even(a, "h_weight");
    const CubeDim dim = a.dim();
    if (!cfg.is_small(a.size(), dim.d())) throw precondition_error("h_weight: set is not small");
    if (a.empty()) return 1;
    const int levels = level_count(dim);
    if (levels == 0) return 0;  // no chain slot for a nonempty support
    return Dyadic::pow2(static_cast<long long>(component_count(a))) * detail::boundary_weight(a) *
           detail::chain_sum(a, levels - 1);
}

enum class WeightKind { g, h, sparse_model };

/// c^{|A|} 2^{-d|A|}: the value g takes on sparse sets (c = 1), h takes c = 2.
inline Dyadic sparse_model_weight(const VertexSet& a, long long c) {
    return Dyadic(c).pow(static_cast<unsigned>(a.size())) *
           Dyadic::pow2(-static_cast<long long>(a.dim().d()) * static_cast<long long>(a.size()));
}

inline WeightFn weight_fn(WeightKind kind, const Config& cfg, long long c = 1) {
    switch (kind) {
    case WeightKind::g: return [](const VertexSet& a) { return g_weight(a); };
    case WeightKind::h: return [cfg](const VertexSet& a) { return h_weight(a, cfg); };
    case WeightKind::sparse_model: return [c](const VertexSet& a) { return sparse_model_weight(a, c); };
    }
    throw precondition_error("unknown weight kind");
}

struct SmallSum {
    Dyadic sum;        // Σ_{A ⊆ D small} weight(A)
    Dyadic companion;  // (1 + c 2^{-d})^{|D|}
    Dyadic difference() const { return sum - companion; }
};

inline Dyadic binomial_companion(CubeDim dim, long long c, std::size_t size) {
    return (Dyadic(1) + Dyadic(c) * Dyadic::pow2(-dim.d())).pow(static_cast<unsigned>(size));
}

inline SmallSum sum_small(const VertexSet& domain, const WeightFn& weight, const Config& cfg, long long c = 1,
                          bool small_only = true) {
    detail::require_even(domain, "sum_small");
    if (domain.size() > 16) throw budget_error("sum_small: exhaustive mode needs |D| <= 16");
    const CubeDim dim = domain.dim();
    SmallSum out;
    for_each_subset_of(domain, [&](const VertexSet& a) {
        if (!small_only || cfg.is_small(a.size(), dim.d())) out.sum += weight(a);
    });
    out.companion = binomial_companion(dim, c, domain.size());
    return out;
}

inline SmallSum sum_small(const VertexSet& domain, WeightKind kind, const Config& cfg, long long c = 1) {
    return sum_small(domain, weight_fn(kind, cfg, c), cfg, c, kind != WeightKind::sparse_model);
}

/// weight(A) equals the product of weight over the 2-components of A.
inline bool factorization_check(const VertexSet& a, const WeightFn& weight) {
    Dyadic product = 1;
    for (const auto& comp : k_components(a, 2)) product *= weight(comp);
    return weight(a) == product;
}

inline bool is_nice(const VertexSet& a, const Config& cfg) {
    return a.size() >= 2 && cfg.is_small(a.size(), a.dim().d()) && is_klinked(a, 2);
}

enum class NiceEngine { naive, linked };

enum class TypeClass { I, II, III };

inline std::string to_string(TypeClass t) {
    switch (t) {
    case TypeClass::I: return "I";
    case TypeClass::II: return "II";
    case TypeClass::III: return "III";
    }
    return "?";
}

/// I: |A| < d/2; II: d/2 ≤ |A| < d²; III otherwise.
inline TypeClass type_classify(CubeDim dim, const VertexSet& a) {
    const std::size_t n = a.size(), d = static_cast<std::size_t>(dim.d());
    if (2 * n < d) return TypeClass::I;
    if (n < d * d) return TypeClass::II;
    return TypeClass::III;
}

namespace detail {

inline std::size_t largest_small_size(CubeDim dim, const Config& cfg) {
    std::size_t n = 0;
    while (n < dim.M() && cfg.is_small(n + 1, dim.d())) ++n;
    return n;
}

template <class Visitor>
void for_each_nice(CubeDim dim, const Config& cfg, NiceEngine engine, Visitor&& visit) {
    if (engine == NiceEngine::naive) {
        if (dim.d() > 5) throw budget_error("nice_sum naive engine: d <= 5");
        for_each_subset_of(VertexSet::evens(dim), [&](const VertexSet& a) {
            if (is_nice(a, cfg)) visit(a);
        });
        return;
    }
    if (dim.d() > 6) throw budget_error("nice_sum linked engine: d <= 6");
    const std::size_t top = largest_small_size(dim, cfg);
    if (top < 2) return;
    double estimate = 0;
    for (std::size_t n = 2; n <= top; ++n) estimate += binomial(dim.M(), n).convert_to<double>();
    if (estimate > static_cast<double>(1u << 26))
        throw budget_error("nice_sum linked engine: about " + std::to_string(static_cast<long long>(estimate)) +
                           " candidate sets; lower alpha");
    for_each_klinked_in_class(dim, 0, 2, 2, top, visit);
}

} // namespace detail

/// Σ over nice A ⊆ E of 2^{-|N(A)|+|B(A)|}.
inline Dyadic nice_sum(CubeDim dim, const Config& cfg, NiceEngine engine) {
    Dyadic total = 0;
    detail::for_each_nice(dim, cfg, engine, [&](const VertexSet& a) { total += g_weight(a); });
    return total;
}

inline std::array<Dyadic, 3> typed_partial_sums(CubeDim dim, const Config& cfg,
                                                NiceEngine engine = NiceEngine::naive) {
    std::array<Dyadic, 3> parts{};
    detail::for_each_nice(dim, cfg, engine, [&](const VertexSet& a) {
        parts[static_cast<std::size_t>(type_classify(dim, a))] += g_weight(a);
    });
    return parts;
}

// ---------------------------------------------------------------------------
// Functions vanishing on E \ A, counted directly.

namespace detail {

// Backtracking over all f : V -> Z with adjacent values differing by 1,
// |f| ≤ 2L on E and |f| ≤ 2L+1 on O (L = ⌊d/2⌋). `even_domain(u, x)`
// restricts values on even vertices.
template <class EvenDomain, class Visitor>
void search_bounded(CubeDim dim, EvenDomain even_ok, Visitor& visit) {
    const int bound_even = 2 * level_count(dim);
    const auto order = [&] {
        std::vector<Vertex> o(dim.vertex_count());
        for (Vertex v = 0; v < o.size(); ++v) o[v] = v;
        std::stable_sort(o.begin(), o.end(), [](Vertex a, Vertex b) { return std::popcount(a) < std::popcount(b); });
        return o;
    }();
    std::vector<int> f(dim.vertex_count(), 0);
    auto fits = [&](Vertex v, int x) {
        if (is_even(v)) return std::abs(x) <= bound_even && even_ok(v, x);
        return std::abs(x) <= bound_even + 1;
    };
    auto rec = [&](auto& self, std::size_t t) -> void {
        if (t == order.size()) {
            visit(f);
            return;
        }
        const Vertex v = order[t];
        const int first = f[v & (v - 1)];
        for (int x : {first - 1, first + 1}) {
            if (!fits(v, x)) continue;
            bool ok = true;
            for (int i = 0; i < dim.d() && ok; ++i) {
                Vertex bit = Vertex{1} << i;
                if (v & bit) ok = std::abs(f[v ^ bit] - x) == 1;
            }
            if (!ok) continue;
            f[v] = x;
            self(self, t + 1);
        }
    };
    for (int x0 = -bound_even; x0 <= bound_even; x0 += 2) {
        if (!fits(0, x0)) continue;
        f[0] = x0;
        rec(rec, 1);
    }
}

} // namespace detail

/// #{f : f = 0 exactly on E \ A, |f| ≤ 2⌊d/2⌋ on E} by direct search.
inline BigInt count_fe_with_support(const VertexSet& a) {
    detail::require_even(a, "count_fe_with_support");
    const CubeDim dim = a.dim();
    if (dim.d() > 4) throw budget_error("count_fe_with_support: d <= 4");
    std::uint64_t n = 0;
    auto visit = [&](const std::vector<int>&) { ++n; };
    detail::search_bounded(dim, [&](Vertex u, int x) { return a.contains(u) ? x != 0 : x == 0; }, visit);
    return n;
}

/// |F^E| by direct search: bounded functions whose nonzero even set is small.
inline BigInt count_fe_total(CubeDim dim, const Config& cfg) {
    if (dim.d() > 4) throw budget_error("count_fe_total: d <= 4");
    std::uint64_t n = 0;
    auto visit = [&](const std::vector<int>& f) {
        std::size_t nonzero = 0;
        for (Vertex u = 0; u < f.size(); ++u) nonzero += is_even(u) && f[u] != 0;
        if (cfg.is_small(nonzero, dim.d())) ++n;
    };
    detail::search_bounded(dim, [](Vertex, int) { return true; }, visit);
    return n;
}

struct FeCountCheck {
    BigInt formula;     // 2^M h(A)
    BigInt enumerated;  // direct search
    bool equal() const { return formula == enumerated; }
};

inline FeCountCheck fe_count_check(const VertexSet& a, const Config& cfg) {
    const CubeDim dim = a.dim();
    const Dyadic scaled = Dyadic::pow2(static_cast<long long>(dim.M())) * h_weight(a, cfg);
    if (!scaled.is_integer()) throw std::logic_error("2^M h(A) is not an integer");
    return {scaled.numerator(), count_fe_with_support(a)};
}

// ---------------------------------------------------------------------------
// Isoperimetry

using Ratio = boost::rational<long long>;

inline void require_single_parity(const VertexSet& a, const char* what) {
    if (!a.all_even() && !a.all_odd()) throw precondition_error(std::string(what) + ": mixed parity");
}

/// |A| / |N(A)|.
inline Ratio iso_ratio(const VertexSet& a) {
    require_single_parity(a, "iso_ratio");
    if (a.empty()) throw precondition_error("iso_ratio: empty set");
    return Ratio(static_cast<long long>(a.size()), static_cast<long long>(neighborhood(a).size()));
}

struct IsoReport {
    Ratio max_ratio{0};
    VertexSet argmax;
};

/// Largest |A|/|N(A)| over nonempty small single-parity A (d ≤ 5).
inline IsoReport iso_report(CubeDim dim, const Config& cfg) {
    if (dim.d() > 5) throw budget_error("iso_report: d <= 5");
    IsoReport rep;
    for (int p = 0; p < 2; ++p)
        for_each_subset_of(VertexSet::parity_class(dim, p), [&](const VertexSet& a) {
            if (a.empty() || !cfg.is_small(a.size(), dim.d())) return;
            Ratio r = iso_ratio(a);
            if (r > rep.max_ratio) {
                rep.max_ratio = r;
                rep.argmax = a;
            }
        });
    return rep;
}

/// |N(A)| ≥ d|A| - 2|A|(|A|-1); vacuous once |A| > d/2.
inline bool iso_lower_bound_check(const VertexSet& a) {
    require_single_parity(a, "iso_lower_bound_check");
    const long long n = static_cast<long long>(a.size()), d = a.dim().d();
    return static_cast<long long>(neighborhood(a).size()) >= d * n - 2 * n * (n - 1);
}

/// An even Hamming ball A' with |A'| = |A| and |N(A')| ≤ |N(A)|, preferring A itself.
inline std::optional<VertexSet> kw_existence_check(const VertexSet& a, BallMode mode = BallMode::exhaustive) {
    detail::require_even(a, "kw_existence_check");
    const CubeDim dim = a.dim();
    if (mode == BallMode::exhaustive && dim.d() > 5) throw budget_error("kw_existence_check: exhaustive needs d <= 5");
    const std::size_t target = neighborhood(a).size();
    std::optional<VertexSet> witness;
    bool is_ball = false;
    for (Vertex center = 0; center < dim.vertex_count() && !is_ball; ++center) {
        for_each_even_ball(dim, center, a.size(), mode, [&](const VertexSet& ball) {
            if (ball == a) is_ball = true;
            if (!witness && neighborhood(ball).size() <= target) witness = ball;
        });
    }
    if (is_ball) return a;
    return witness;
}

} // namespace hcube
