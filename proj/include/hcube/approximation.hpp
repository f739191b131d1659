#pragma once

// Greedy covers, covering approximations, the two-step algorithm producing
// approximating quadruples, their validation, class enumeration and the
// tight/slack reconstruction procedure.

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hcube/config.hpp"
#include "hcube/cube.hpp"

namespace hcube {

// Exact comparisons against √d.

/// t ≥ √d
inline bool at_least_sqrt(long long t, int d) { return t >= 0 && t * t >= d; }

/// t > d - √d
inline bool above_d_minus_sqrt(long long t, int d) {
    const long long gap = d - t;
    return gap < 0 || gap * gap < d;
}

struct CoverReport {
    VertexSet cover;
    std::size_t min_degree = 0;  // a: least number of Y-neighbours of an x ∈ X
    std::size_t max_degree = 0;  // b: largest number of X-neighbours of a y ∈ Y
    double bound = 0;            // (|Y|/a)(1 + ln b)
    bool meets_bound = true;
};

/// Greedy max-coverage cover of X by Y (ties to the smaller vertex), with the
/// degree hypotheses measured and the size bound checked.
inline CoverReport greedy_cover_report(const VertexSet& x, const VertexSet& y) {
    CoverReport rep{VertexSet(x.dim())};
    if (x.empty()) return rep;
    rep.min_degree = static_cast<std::size_t>(-1);
    bool coverable = true;
    x.for_each([&](Vertex v) {
        auto deg = static_cast<std::size_t>(degree_into(v, y));
        if (deg == 0) coverable = false;
        rep.min_degree = std::min(rep.min_degree, deg);
    });
    if (!coverable) throw precondition_error("greedy_cover: some vertex of X has no neighbour in Y");
    y.for_each([&](Vertex v) { rep.max_degree = std::max(rep.max_degree, static_cast<std::size_t>(degree_into(v, x))); });

    VertexSet uncovered = x;
    const std::vector<Vertex> pool = y.members();
    while (!uncovered.empty()) {
        Vertex best = pool.front();
        int best_gain = -1;
        for (Vertex v : pool) {
            int gain = degree_into(v, uncovered);
            if (gain > best_gain) {
                best_gain = gain;
                best = v;
            }
        }
        rep.cover.insert(best);
        uncovered -= neighborhood(x.dim(), best);
    }
    rep.bound = static_cast<double>(y.size()) / static_cast<double>(rep.min_degree) *
                (1.0 + std::log(static_cast<double>(rep.max_degree)));
    rep.meets_bound = static_cast<double>(rep.cover.size()) <= rep.bound + 1e-9;
    return rep;
}

inline VertexSet greedy_cover(const VertexSet& x, const VertexSet& y) { return greedy_cover_report(x, y).cover; }

struct CoverPair {
    VertexSet F_prime;  // ⊆ O, covers A inside G
    VertexSet P_prime;  // ⊆ E, covers B inside H
    CoverReport f_report;
    CoverReport p_report;
};

namespace detail {

inline void require_subject(const VertexSet& a, const char* what) {
    if (!a.all_even()) throw precondition_error(std::string(what) + ": A must be a subset of E");
    if (a.size() < 2) throw precondition_error(std::string(what) + ": |A| must be at least 2");
    if (!is_klinked(a, 2)) throw precondition_error(std::string(what) + ": A must be 2-linked");
}

} // namespace detail

inline CoverPair covering_approximation(const VertexSet& a) {
    detail::require_subject(a, "covering_approximation");
    const VertexSet g = neighborhood(a);
    const VertexSet b = interior(a);
    const VertexSet h = neighborhood(b);
    CoverPair out{VertexSet(a.dim()), VertexSet(a.dim()), greedy_cover_report(a, g), greedy_cover_report(b, h)};
    out.F_prime = out.f_report.cover;
    out.P_prime = out.p_report.cover;
    return out;
}

struct StepTrace {
    std::size_t step1_iterations = 0;
    std::size_t step2_iterations = 0;
    std::size_t ambient_size = 0;    // |G|
    std::size_t initial_excess = 0;  // |S'' \ A| when Step 2 starts

    /// step1·√d ≤ |G| and step2·√d ≤ |S''\A|.
    bool within_bounds(int d) const {
        auto ok = [d](std::size_t it, std::size_t budget) {
            const auto i = static_cast<long long>(it), b = static_cast<long long>(budget);
            return i * i * d <= b * b;
        };
        return ok(step1_iterations, ambient_size) && ok(step2_iterations, initial_excess);
    }
};

struct StepResult {
    VertexSet F;  // outer side, ⊆ G
    VertexSet S;  // subject side, ⊇ subject
    StepTrace trace;
};

/// The two-step refinement for a subject on parity class `side`. Stage 1 is
/// side 0 (A ⊆ E, G = N(A)); Stage 2 is side 1 (B ⊆ O, H = N(B)).
inline StepResult approx_step(const VertexSet& subject, const VertexSet& f_prime, const VertexSet& s_prime,
                              int side = 0) {
    const CubeDim dim = subject.dim();
    const int d = dim.d();
    const VertexSet own = VertexSet::parity_class(dim, side);
    const VertexSet other = VertexSet::parity_class(dim, 1 - side);
    if (!subject.is_subset_of(own)) throw precondition_error("approx_step: subject not in its parity class");
    const VertexSet g = neighborhood(subject);
    if (!f_prime.is_subset_of(g)) throw precondition_error("approx_step: F' must lie inside N(subject)");
    if (!subject.is_subset_of(s_prime) || !s_prime.is_subset_of(own))
        throw precondition_error("approx_step: S' must contain the subject and lie in its class");

    StepResult out{f_prime, s_prime, {}};
    out.trace.ambient_size = g.size();

    // Step 1
    VertexSet f = f_prime;
    for (;;) {
        const VertexSet missing = g - f;
        Vertex pick = 0;
        bool found = false;
        subject.for_each([&](Vertex u) {
            if (!found && at_least_sqrt(degree_into(u, missing), d)) {
                pick = u;
                found = true;
            }
        });
        if (!found) break;
        f |= neighborhood(dim, pick);
        ++out.trace.step1_iterations;
    }
    const VertexSet outside_f = other - f;
    VertexSet s(dim);
    s_prime.for_each([&](Vertex u) {
        if (!at_least_sqrt(degree_into(u, outside_f), d)) s.insert(u);
    });
    out.trace.initial_excess = (s - subject).size();

    // Step 2
    const VertexSet beyond = other - g;
    for (;;) {
        Vertex pick = 0;
        bool found = false;
        beyond.for_each([&](Vertex w) {
            if (!found && at_least_sqrt(degree_into(w, s), d)) {
                pick = w;
                found = true;
            }
        });
        if (!found) break;
        s -= neighborhood(dim, pick);
        ++out.trace.step2_iterations;
    }
    other.for_each([&](Vertex w) {
        if (at_least_sqrt(degree_into(w, s), d)) f.insert(w);
    });
    out.F = f;
    out.S = s;
    return out;
}

struct ApproxQuadruple {
    VertexSet F;  // ⊆ O
    VertexSet S;  // ⊆ E
    VertexSet P;  // ⊆ E
    VertexSet Q;  // ⊆ O
    friend bool operator==(const ApproxQuadruple&, const ApproxQuadruple&) = default;
};

struct QuadrupleRun {
    ApproxQuadruple quad;
    CoverPair covers;
    StepTrace stage1;
    StepTrace stage2;
};

inline QuadrupleRun approximating_quadruple_run(const VertexSet& a) {
    const CubeDim dim = a.dim();
    CoverPair covers = covering_approximation(a);
    StepResult one = approx_step(a, covers.F_prime, VertexSet::evens(dim), 0);
    StepResult two = approx_step(interior(a), covers.P_prime, VertexSet::odds(dim), 1);
    return {{one.F, one.S, two.F, two.S}, std::move(covers), one.trace, two.trace};
}

inline ApproxQuadruple approximating_quadruple(const VertexSet& a) { return approximating_quadruple_run(a).quad; }

/// The exact quadruple (G, A, H, B).
inline ApproxQuadruple exact_quadruple(const VertexSet& a) {
    const VertexSet b = interior(a);
    return {neighborhood(a), a, neighborhood(b), b};
}

struct QuadValidation {
    std::array<bool, 6> quad{};
    bool s_bound = false;  // |S| ≤ |F| + |(G\F) ∪ (S\A)|/√d
    bool x_bound = false;  // |(G\F) ∪ (S\A)| ≤ 2gd/(d-√d)
    bool q_bound = false;  // |Q| ≤ |P| + |(H\P) ∪ (Q\B)|/√d
    bool y_bound = false;  // |(H\P) ∪ (Q\B)| ≤ 2hd/(d-√d)

    bool conditions() const {
        for (bool b : quad)
            if (!b) return false;
        return true;
    }
    bool all() const { return conditions() && s_bound && x_bound && q_bound && y_bound; }
    std::string failures() const {
        std::string out;
        for (std::size_t i = 0; i < 6; ++i)
            if (!quad[i]) out += "quad" + std::to_string(i + 1) + " ";
        if (!s_bound) out += "s_bound ";
        if (!x_bound) out += "x_bound ";
        if (!q_bound) out += "q_bound ";
        if (!y_bound) out += "y_bound ";
        if (!out.empty()) out.pop_back();
        return out;
    }
};

namespace detail {

// every u ∈ inner has d_outer(u) > d - √d
inline bool dense_into(const VertexSet& inner, const VertexSet& outer) {
    const int d = inner.dim().d();
    bool ok = true;
    inner.for_each([&](Vertex u) { ok = ok && above_d_minus_sqrt(degree_into(u, outer), d); });
    return ok;
}

// |S| ≤ |F| + X/√d and X ≤ 2gd/(d-√d), with X = |(G\F) ∪ (S\A)|.
inline std::pair<bool, bool> size_bounds(const VertexSet& subject, const VertexSet& g, const VertexSet& f,
                                         const VertexSet& s) {
    const long long d = subject.dim().d();
    const long long x = static_cast<long long>(((g - f) | (s - subject)).size());
    const long long excess = static_cast<long long>(s.size()) - static_cast<long long>(f.size());
    const bool first = excess <= 0 || excess * excess * d <= x * x;
    const long long lhs = x * d - 2 * static_cast<long long>(g.size()) * d;
    const bool second = lhs <= 0 || lhs * lhs <= x * x * d;
    return {first, second};
}

} // namespace detail

inline QuadValidation validate_quadruple(const VertexSet& a, const ApproxQuadruple& q) {
    const CubeDim dim = a.dim();
    const VertexSet e = VertexSet::evens(dim), o = VertexSet::odds(dim);
    const VertexSet g = neighborhood(a), b = interior(a), h = neighborhood(b);
    QuadValidation v;
    v.quad[0] = q.F.is_subset_of(g) && a.is_subset_of(q.S);
    v.quad[1] = detail::dense_into(q.S, q.F);
    v.quad[2] = detail::dense_into(o - q.F, e - q.S);
    v.quad[3] = q.P.is_subset_of(h) && b.is_subset_of(q.Q);
    v.quad[4] = detail::dense_into(q.Q, q.P);
    v.quad[5] = detail::dense_into(e - q.P, o - q.Q);
    std::tie(v.s_bound, v.x_bound) = detail::size_bounds(a, g, q.F, q.S);
    std::tie(v.q_bound, v.y_bound) = detail::size_bounds(b, h, q.P, q.Q);
    return v;
}

// ---------------------------------------------------------------------------
// Classes H(a, g, b, h)

struct ClassKey {
    std::size_t a = 0, g = 0, b = 0, h = 0;
    friend auto operator<=>(const ClassKey&, const ClassKey&) = default;
    std::string to_string() const {
        return "(" + std::to_string(a) + "," + std::to_string(g) + "," + std::to_string(b) + "," +
               std::to_string(h) + ")";
    }
};

inline ClassKey class_key(const VertexSet& a) {
    const VertexSet b = interior(a);
    return {a.size(), neighborhood(a).size(), b.size(), neighborhood(b).size()};
}

template <class Visitor>
void for_each_in_class(CubeDim dim, const ClassKey& key, Visitor&& visit) {
    if (dim.d() > 5) throw budget_error("class_enumerate: d <= 5");
    if (key.a == 0 || key.a > dim.M() || key.b > key.g || key.h > key.a) return;
    for_each_klinked_in_class(dim, 0, 2, key.a, key.a, [&](const VertexSet& s) {
        if (class_key(s) == key) visit(s);
    });
}

inline std::vector<VertexSet> class_enumerate(CubeDim dim, const ClassKey& key) {
    std::vector<VertexSet> out;
    for_each_in_class(dim, key, [&](const VertexSet& s) { out.push_back(s); });
    return out;
}

// ---------------------------------------------------------------------------
// Reconstruction

struct Reconstruction {
    bool q_tight = false;
    bool s_tight = false;
    std::vector<VertexSet> candidates;  // sorted, without repeats
};

namespace detail {

inline void check_combination_budget(std::size_t n, std::size_t k) {
    if (k <= n && binomial(n, k) > BigInt(1) << 22) throw budget_error("reconstruct_candidates: branch too wide");
}

template <class Visitor>
void for_each_sized_subset(const VertexSet& pool, std::size_t r, Visitor&& visit) {
    const std::vector<Vertex> m = pool.members();
    if (r > m.size()) return;
    check_combination_budget(m.size(), r);
    if (r == 0) {
        visit(VertexSet(pool.dim()));
        return;
    }
    for_each_combination(m, r, [&](const std::vector<Vertex>& pick) { visit(VertexSet::from_range(pool.dim(), pick)); });
}

} // namespace detail

/// Every A of the class the branch for (q, key) can produce.
inline Reconstruction reconstruct_candidates(const ApproxQuadruple& q, const ClassKey& key, const Config& cfg) {
    const CubeDim dim = q.S.dim();
    if (dim.d() < 2) throw precondition_error("reconstruct_candidates: d >= 2");
    if (!q.F.all_odd() || !q.S.all_even() || !q.P.all_even() || !q.Q.all_odd())
        throw precondition_error("reconstruct_candidates: quadruple has wrong parities");
    const VertexSet e = VertexSet::evens(dim), o = VertexSet::odds(dim);
    if (!detail::dense_into(q.S, q.F) || !detail::dense_into(o - q.F, e - q.S) || !detail::dense_into(q.Q, q.P) ||
        !detail::dense_into(e - q.P, o - q.Q))
        throw precondition_error("reconstruct_candidates: quadruple fails quad2, quad3, quad5 or quad6");

    const double log_d = std::log2(static_cast<double>(dim.d()));
    const auto g = static_cast<double>(key.g);
    const auto b = static_cast<double>(key.b), h = static_cast<double>(key.h);
    Reconstruction out;
    out.q_tight = static_cast<double>(q.Q.size()) < b + cfg.gamma * h / log_d;
    out.s_tight = static_cast<double>(q.S.size()) < g - cfg.gamma * g / (4 * log_d);

    std::vector<VertexSet> choices_d;
    if (out.q_tight) {
        detail::for_each_sized_subset(q.Q, key.b, [&](const VertexSet& bb) { choices_d.push_back(neighborhood(bb)); });
    } else {
        choices_d.push_back(q.P);
    }

    std::set<VertexSet> found;
    auto complete = [&](const VertexSet& dset, const VertexSet& pool) {
        if (dset.size() > key.a) return;
        detail::for_each_sized_subset(pool - dset, key.a - dset.size(), [&](const VertexSet& rest) {
            found.insert(dset | rest);
        });
    };
    for (const VertexSet& dset : choices_d) {
        if (out.s_tight) {
            complete(dset, q.S);
        } else {
            const VertexSet room = neighborhood(q.S) - q.F;
            if (key.g < q.F.size()) continue;
            detail::for_each_sized_subset(room, key.g - q.F.size(), [&](const VertexSet& extra) {
                const VertexSet gg = q.F | extra;
                VertexSet hull(dim);
                e.for_each([&](Vertex u) {
                    if (neighborhood(dim, u).is_subset_of(gg)) hull.insert(u);
                });
                complete(dset, hull);
            });
        }
    }
    out.candidates.assign(found.begin(), found.end());
    return out;
}

} // namespace hcube
