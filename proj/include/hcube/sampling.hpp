#pragma once

// Exact and Markov-chain samplers over F and exact small-d statistics.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "hcube/config.hpp"
#include "hcube/counting.hpp"
#include "hcube/homomorphism.hpp"

namespace hcube {

using Rational = boost::multiprecision::cpp_rational;

/// Counter-based generator: output i of stream s is a hash of (seed, s, i).
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
    std::uint64_t counter() const { return counter_; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        boost::random::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
        return dist(*this);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// All of F for d ≤ 5, packed one byte per value.
class FTable {
public:
    explicit FTable(CubeDim dim) : dim_(dim) {
        for_each_normalized_height(dim, [&](const std::vector<int>& f, int, int) {
            for (int x : f) data_.push_back(static_cast<std::int8_t>(x));
        });
    }

    CubeDim dim() const { return dim_; }
    std::size_t size() const { return data_.size() / dim_.vertex_count(); }
    HeightFunction at(std::size_t i) const {
        const std::size_t n = dim_.vertex_count();
        return HeightFunction(HeightFunction::unchecked, dim_,
                              std::vector<int>(data_.begin() + static_cast<std::ptrdiff_t>(i * n),
                                               data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
    }

private:
    CubeDim dim_;
    std::vector<std::int8_t> data_;
};

inline std::vector<HeightFunction> enumerate_F(CubeDim dim) {
    std::vector<HeightFunction> out;
    for_each_normalized_height(dim, [&](const std::vector<int>& f, int, int) {
        out.emplace_back(HeightFunction::unchecked, dim, f);
    });
    return out;
}

enum class SampleEngine { exact, mcmc };

struct SampleConfig {
    CubeDim dim{1};
    std::uint64_t seed = 0;
    std::size_t count = 0;
    SampleEngine engine = SampleEngine::exact;
    std::size_t burn_in = 200;  // sweeps
    std::size_t thinning = 4;   // sweeps between retained samples
};

/// Independent uniform draws by index into the enumeration of F.
inline std::vector<HeightFunction> sample_uniform(const SampleConfig& cfg, const FTable* table = nullptr) {
    if (cfg.engine != SampleEngine::exact) throw precondition_error("sample_uniform: exact engine only");
    if (cfg.dim.d() > 5) throw budget_error("sample_uniform: exact engine needs d <= 5");
    if (cfg.count == 0) return {};
    std::optional<FTable> own;
    if (!table) table = &own.emplace(cfg.dim);
    CounterRng rng(cfg.seed, 0);
    std::vector<HeightFunction> out;
    out.reserve(cfg.count);
    for (std::size_t i = 0; i < cfg.count; ++i) out.push_back(table->at(rng.below(table->size())));
    return out;
}

struct McmcDiagnostics {
    double mean_range_first_half = 0;
    double mean_range_second_half = 0;
    double drift() const { return std::abs(mean_range_second_half - mean_range_first_half); }
};

struct McmcResult {
    std::vector<HeightFunction> samples;
    bool approximate = true;
    McmcDiagnostics diagnostics;
};

/// Heat-bath single-site chain on proper 3-colourings, re-rooted at 0 and lifted.
inline McmcResult mcmc_sample(const SampleConfig& cfg) {
    const CubeDim dim = cfg.dim;
    if (dim.d() > 8) throw budget_error("mcmc_sample: d <= 8");
    if (cfg.thinning == 0) throw precondition_error("mcmc_sample: thinning must be positive");
    CounterRng rng(cfg.seed, 1);
    std::vector<std::uint8_t> chi(dim.vertex_count());
    for (Vertex v = 0; v < chi.size(); ++v) chi[v] = static_cast<std::uint8_t>(parity(v));

    auto sweep = [&] {
        for (std::size_t t = 0; t < chi.size(); ++t) {
            const auto v = static_cast<Vertex>(rng.below(chi.size()));
            unsigned used = 0;
            for (int i = 0; i < dim.d(); ++i) used |= 1u << chi[v ^ (Vertex{1} << i)];
            std::uint8_t allowed[3];
            std::uint64_t n = 0;
            for (std::uint8_t c = 0; c < 3; ++c)
                if (!(used >> c & 1u)) allowed[n++] = c;
            chi[v] = allowed[rng.below(n)];
        }
    };

    McmcResult out;
    for (std::size_t s = 0; s < cfg.burn_in; ++s) sweep();
    double first = 0, second = 0;
    for (std::size_t k = 0; k < cfg.count; ++k) {
        for (std::size_t s = 0; s < cfg.thinning; ++s) sweep();
        std::vector<std::uint8_t> rooted(chi.size());
        for (Vertex v = 0; v < chi.size(); ++v) rooted[v] = static_cast<std::uint8_t>(mod3(chi[v] - chi[0]));
        out.samples.push_back(lift_coloring(ThreeColoring(dim, std::move(rooted))));
        const auto r = static_cast<double>(range_of(out.samples.back()).size());
        (2 * k < cfg.count ? first : second) += r;
    }
    const std::size_t half = cfg.count / 2 + cfg.count % 2;
    if (half) out.diagnostics.mean_range_first_half = first / static_cast<double>(half);
    if (cfg.count - half) out.diagnostics.mean_range_second_half = second / static_cast<double>(cfg.count - half);
    return out;
}

struct StatReport {
    std::string engine;                  // "exact" or "empirical"
    std::map<int, Rational> exact;       // P(|R| = i), exact engine only
    std::map<int, double> frequency;     // P(|R| = i)
    std::map<int, double> std_error;     // binomial standard error, empirical only
    double more_than_5 = 0;              // P(|R| > 5)
    std::size_t samples = 0;
};

inline StatReport range_statistics(const RangeTable& table) {
    StatReport rep;
    rep.engine = "exact";
    Rational above = 0;
    for (const auto& [i, n] : table.counts) {
        Rational p(n, table.total);
        rep.exact[i] = p;
        rep.frequency[i] = p.convert_to<double>();
        rep.std_error[i] = 0;
        if (i > 5) above += p;
    }
    rep.more_than_5 = above.convert_to<double>();
    return rep;
}

inline StatReport range_statistics(CubeDim dim) { return range_statistics(count_by_range(dim)); }

inline StatReport range_statistics(const std::vector<HeightFunction>& samples) {
    StatReport rep;
    rep.engine = "empirical";
    rep.samples = samples.size();
    if (samples.empty()) return rep;
    std::map<int, std::size_t> counts;
    for (const auto& f : samples) ++counts[static_cast<int>(range_of(f).size())];
    const auto n = static_cast<double>(samples.size());
    for (const auto& [i, c] : counts) {
        const double p = static_cast<double>(c) / n;
        rep.frequency[i] = p;
        rep.std_error[i] = std::sqrt(p * (1 - p) / n);
        if (i > 5) rep.more_than_5 += p;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Probability that exactly one endpoint of an edge lies in C(f)

struct EdgeStatistic {
    Rational value;                // for the edge (0, e_0)
    bool edge_invariant = true;    // same value on every edge checked
    std::size_t edges_checked = 0;
};

inline EdgeStatistic edge_C_statistic(CubeDim dim, bool all_edges = true) {
    if (dim.d() > 4) throw budget_error("edge_C_statistic: exact engine needs d <= 4");
    std::vector<Edge> edges;
    for (Vertex u = 0; u < dim.vertex_count(); ++u)
        for (int i = 0; i < dim.d(); ++i) {
            Vertex v = u ^ (Vertex{1} << i);
            if (u < v && (all_edges || (u == 0 && i == 0))) edges.push_back({u, v});
        }
    std::vector<std::uint64_t> hits(edges.size(), 0);
    std::uint64_t total = 0;
    for_each_normalized_height(dim, [&](const std::vector<int>& f, int, int) {
        const VertexSet c = constant_nbhd_set(HeightFunction(HeightFunction::unchecked, dim, f));
        for (std::size_t k = 0; k < edges.size(); ++k) hits[k] += c.contains(edges[k].u) != c.contains(edges[k].v);
        ++total;
    });
    EdgeStatistic out;
    out.value = Rational(hits.front(), total);
    out.edges_checked = edges.size();
    for (std::uint64_t h : hits) out.edge_invariant = out.edge_invariant && h == hits.front();
    return out;
}

struct MostlyConstantFractions {
    Rational even_side;  // constant off a small set on E
    Rational odd_side;
    Rational both;
};

inline MostlyConstantFractions mostly_constant_fraction(CubeDim dim, const Config& cfg) {
    if (dim.d() > 4) throw budget_error("mostly_constant_fraction: d <= 4");
    std::uint64_t e = 0, o = 0, both = 0, total = 0;
    for_each_normalized_height(dim, [&](const std::vector<int>& f, int, int) {
        const MostlyConstant m = is_mostly_constant(HeightFunction(HeightFunction::unchecked, dim, f), cfg);
        e += m == MostlyConstant::even_side || m == MostlyConstant::both;
        o += m == MostlyConstant::odd_side || m == MostlyConstant::both;
        both += m == MostlyConstant::both;
        ++total;
    });
    return {Rational(e, total), Rational(o, total), Rational(both, total)};
}

// ---------------------------------------------------------------------------
// Goodness of fit

struct ChiSquare {
    double statistic = 0;
    double degrees_of_freedom = 0;
    double p_value = 1;
};

/// Pearson chi-square of observed counts against expected probabilities.
inline ChiSquare chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw precondition_error("chi_square_test: need matching category lists of length >= 2");
    double n = 0;
    for (auto c : observed) n += static_cast<double>(c);
    ChiSquare out;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double want = n * expected[i];
        if (want <= 0) throw precondition_error("chi_square_test: expected probabilities must be positive");
        const double diff = static_cast<double>(observed[i]) - want;
        out.statistic += diff * diff / want;
    }
    out.degrees_of_freedom = static_cast<double>(observed.size() - 1);
    boost::math::chi_squared dist(out.degrees_of_freedom);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

/// Chi-square of uniform samples against the uniform law on all of F (d ≤ 5).
inline ChiSquare uniformity_test(const std::vector<HeightFunction>& samples, const FTable& table) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const HeightFunction f = table.at(i);
        auto v = f.values();
        index.emplace(std::vector<int>(v.begin(), v.end()), i);
    }
    std::vector<std::uint64_t> observed(table.size(), 0);
    for (const auto& f : samples) {
        auto v = f.values();
        auto it = index.find(std::vector<int>(v.begin(), v.end()));
        if (it == index.end()) throw precondition_error("uniformity_test: sample outside F");
        ++observed[it->second];
    }
    return chi_square_test(observed, std::vector<double>(table.size(), 1.0 / static_cast<double>(table.size())));
}

} // namespace hcube
