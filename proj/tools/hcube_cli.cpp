// hcube: command-line front end for counting, verification sweeps, sampling,
// statistics and the approximation machinery.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcube/approximation.hpp"
#include "hcube/counting.hpp"
#include "hcube/document.hpp"
#include "hcube/homomorphism.hpp"
#include "hcube/sampling.hpp"
#include "hcube/weights.hpp"

using namespace hcube;

namespace {

enum Exit { ok = 0, assertion_failure = 1, usage_error = 2 };

struct Options {
    int d = 0;
    std::string engine = "auto";
    double alpha = 1.9;
    double gamma = 0.1;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    unsigned jobs = 1;
    std::string format = "doc";
    std::string cache_dir;
    std::size_t budget_mb = 2048;

    // subcommand specific
    std::string suite;
    std::string sweep = "all";
    bool exact = false;
    std::size_t burn_in = 200;
    std::size_t thinning = 4;

    Config config() const {
        Config c;
        c.alpha = alpha;
        c.gamma = gamma;
        c.memory_budget_mb = budget_mb;
        c.validate();
        return c;
    }

    json echo() const {
        return {{"d", d}, {"engine", engine}, {"alpha", alpha}, {"gamma", gamma}, {"seed", seed},
                {"n", n}, {"budget_mb", budget_mb}};
    }
};

void add_common(CLI::App* cmd, Options& o, bool needs_d = true) {
    auto* d = cmd->add_option("--d", o.d, "cube dimension")->check(CLI::Range(1, max_dimension));
    if (needs_d) d->required();
    cmd->add_option("--engine", o.engine, "engine (auto, brute, dp, backtrack, rank, exact, mcmc)");
    cmd->add_option("--alpha", o.alpha, "small-set base: |A| < alpha^d");
    cmd->add_option("--gamma", o.gamma, "tight/slack parameter");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--n", o.n, "number of samples");
    cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"doc", "csv"}));
    cmd->add_option("--cache-dir", o.cache_dir, "result cache directory (default: $HCUBE_CACHE_DIR)");
    cmd->add_option("--budget-mb", o.budget_mb, "memory budget for the DP engine");
}

std::string big(const BigInt& x) { return x.str(); }

// ---------------------------------------------------------------------------
// count

json count_payload(const Options& o) {
    const CubeDim dim(o.d);
    const Config cfg = o.config();
    std::string engine = o.engine;
    if (engine == "auto") engine = o.d <= 5 ? "backtrack" : "dp";

    json p;
    p["engine"] = engine;
    std::optional<RangeTable> table;
    BigInt total;
    if (engine == "brute") {
        total = count_brute(dim, o.jobs);
    } else if (engine == "dp") {
        total = count_dp(dim, cfg.memory_budget_mb);
    } else if (engine == "rank") {
        total = count_rank_functions(dim);
    } else if (engine == "backtrack") {
        table = count_by_range(dim);
        total = table->total;
    } else {
        throw precondition_error("unknown count engine: " + engine);
    }
    p["total"] = big(total);
    if (table) {
        json counts = json::object();
        for (const auto& [i, c] : table->counts) counts[std::to_string(i)] = big(c);
        p["range_counts"] = counts;
        const AsymptoticReport rep = asymptotic_report(*table);
        p["asymptotic"] = {{"engine", engine},
                           {"ratio_total", static_cast<double>(rep.ratio_total)},
                           {"ref_total", static_cast<double>(rep.ref_total)},
                           {"ratio_range3", static_cast<double>(rep.ratio3)},
                           {"ratio_range4", static_cast<double>(rep.ratio4)},
                           {"ratio_range5", static_cast<double>(rep.ratio5)},
                           {"ref_range3", static_cast<double>(rep.ref3)},
                           {"ref_range4", static_cast<double>(rep.ref4)},
                           {"ref_range5", static_cast<double>(rep.ref5)},
                           {"share_range_at_most_5", static_cast<double>(rep.share_at_most_5)}};
    }
    // Trend across the exactly countable dimensions, for the record only.
    json trend = json::array();
    for (int d = 2; d <= 5; ++d) {
        const RangeTable t = count_by_range(CubeDim(d));
        const AsymptoticReport r = asymptotic_report(t);
        trend.push_back({{"d", d},
                         {"engine", "backtrack"},
                         {"total", big(t.total)},
                         {"total_over_2^M", static_cast<double>(r.ratio_total)},
                         {"two_e", static_cast<double>(r.ref_total)},
                         {"p_range_at_most_5", static_cast<double>(r.share_at_most_5)}});
    }
    p["trend"] = trend;
    return p;
}

// ---------------------------------------------------------------------------
// verify

struct Assertion {
    explicit Assertion(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::vector<std::string> counterexamples;

    void check(bool pass, const std::string& what) {
        ++checked;
        if (pass) return;
        ++failures;
        if (counterexamples.size() < 5) counterexamples.push_back(what);
    }
    json to_json() const {
        return {{"name", name},
                {"checked", checked},
                {"failures", failures},
                {"pass", failures == 0},
                {"counterexamples", counterexamples}};
    }
};

std::vector<HeightFunction> bijection_population(const Options& o) {
    const CubeDim dim(o.d);
    if (o.d <= 3) return enumerate_F(dim);
    SampleConfig sc{dim, o.seed, o.n ? o.n : 10000};
    return sample_uniform(sc);
}

std::vector<Assertion> suite_bijection(const Options& o) {
    Assertion rank{"rank round trip"}, color{"colouring round trip"};
    for (const auto& f : bijection_population(o)) {
        rank.check(from_rank_function(to_rank_function(f)) == f, to_flat(f));
        color.check(lift_coloring(to_coloring(f)) == f, to_flat(f));
    }
    return {rank, color};
}

std::vector<Assertion> suite_sums(const Options& o) {
    const CubeDim dim(o.d);
    const Config cfg = o.config();
    Assertion fact_g{"g factorizes over 2-components"}, fact_h{"h factorizes over 2-components"};
    Assertion sparse{"g(A) = 2^(-d|A|) on sparse A"}, fe{"2^M h(A) counts F^E(A)"}, comp{"binomial companion"};
    const WeightFn g = weight_fn(WeightKind::g, cfg);
    const WeightFn h = weight_fn(WeightKind::h, cfg);
    for_each_subset_of(VertexSet::evens(dim), [&](const VertexSet& a) {
        const std::string name = a.to_string();
        fact_g.check(factorization_check(a, g), name);
        if (cfg.is_small(a.size(), o.d)) {
            bool small_parts = true;
            for (const auto& c : k_components(a, 2)) small_parts = small_parts && cfg.is_small(c.size(), o.d);
            if (small_parts) fact_h.check(factorization_check(a, h), name);
            if (o.d <= 4) fe.check(fe_count_check(a, cfg).equal(), name);
        }
        if (is_sparse(a))
            sparse.check(g_weight(a) == Dyadic::pow2(-static_cast<long long>(o.d) * static_cast<long long>(a.size())),
                         name);
    });
    for (long long c : {1, 2}) {
        const SmallSum s = sum_small(VertexSet::evens(dim), WeightKind::sparse_model, cfg, c);
        comp.check(s.sum == s.companion, "c=" + std::to_string(c));
    }
    std::vector<Assertion> out{fact_g, fact_h, sparse, comp};
    if (o.d <= 4) out.push_back(fe);
    return out;
}

std::vector<Assertion> suite_isoperimetry(const Options& o) {
    const CubeDim dim(o.d);
    Assertion lb{"|N(A)| >= d|A| - 2|A|(|A|-1) for |A| <= 3"};
    for (int p = 0; p < 2; ++p) {
        const auto members = VertexSet::parity_class(dim, p).members();
        for (std::size_t k = 1; k <= 3; ++k)
            for_each_combination(members, k, [&](const std::vector<Vertex>& pick) {
                const VertexSet a = VertexSet::from_range(dim, pick);
                lb.check(iso_lower_bound_check(a), a.to_string());
            });
    }
    return {lb};
}

std::vector<Assertion> suite_approximation(const Options& o) {
    const CubeDim dim(o.d);
    if (o.d > 5) throw budget_error("approximation suite: d <= 5");
    Assertion quad{"quadruple passes quad1-quad6 and size bounds"}, exact{"exact quadruple validates"};
    Assertion iters{"step iteration bounds"}, cover{"greedy cover bound"};
    for_each_klinked_in_class(dim, 0, 2, 2, dim.M(), [&](const VertexSet& a) {
        const std::string name = a.to_string();
        const QuadrupleRun run = approximating_quadruple_run(a);
        const QuadValidation v = validate_quadruple(a, run.quad);
        quad.check(v.all(), name + " " + v.failures());
        exact.check(validate_quadruple(a, exact_quadruple(a)).all(), name);
        iters.check(run.stage1.within_bounds(o.d) && run.stage2.within_bounds(o.d), name);
        cover.check(run.covers.f_report.meets_bound && run.covers.p_report.meets_bound, name);
    });
    return {quad, exact, iters, cover};
}

std::vector<Assertion> suite_chains(const Options& o) {
    const CubeDim dim(o.d);
    const Config cfg = o.config();
    if (o.d > 4) throw budget_error("chains suite: d <= 4");
    Assertion round{"chain decompose/compose round trip"};
    const int bound = 2 * level_count(dim);
    for_each_normalized_height(dim, [&](const std::vector<int>& values, int, int) {
        std::size_t support = 0;
        bool bounded = true;
        VertexSet::evens(dim).for_each([&](Vertex u) {
            support += values[u] != 0;
            bounded = bounded && std::abs(values[u]) <= bound;
        });
        if (!bounded || !cfg.is_small(support, o.d)) return;
        const HeightFunction f(HeightFunction::unchecked, dim, values);
        const LevelChain lc = chain_decompose(f, cfg);
        check_legitimate(lc);
        round.check(chain_compose(lc) == f, to_flat(f));
    });
    return {round};
}

std::vector<Assertion> suite_kw(const Options& o) {
    const CubeDim dim(o.d);
    Assertion kw{"even Hamming ball witness exists"};
    for_each_subset_of(VertexSet::evens(dim), [&](const VertexSet& a) {
        kw.check(kw_existence_check(a).has_value(), a.to_string());
    });
    return {kw};
}

json verify_payload(const Options& o, bool& failed) {
    std::vector<Assertion> results;
    if (o.suite == "bijection") results = suite_bijection(o);
    else if (o.suite == "sums") results = suite_sums(o);
    else if (o.suite == "isoperimetry") results = suite_isoperimetry(o);
    else if (o.suite == "approximation") results = suite_approximation(o);
    else if (o.suite == "chains") results = suite_chains(o);
    else if (o.suite == "kw") results = suite_kw(o);
    else throw precondition_error("unknown suite: " + o.suite);
    json p = {{"suite", o.suite}, {"assertions", json::array()}};
    failed = false;
    for (const auto& a : results) {
        p["assertions"].push_back(a.to_json());
        failed = failed || a.failures > 0;
    }
    return p;
}

// ---------------------------------------------------------------------------
// sample / stats / approx

json sample_payload(const Options& o, std::vector<HeightFunction>& samples) {
    SampleConfig sc{CubeDim(o.d), o.seed, o.n};
    sc.burn_in = o.burn_in;
    sc.thinning = o.thinning;
    std::string engine = o.engine == "auto" ? (o.d <= 5 ? "exact" : "mcmc") : o.engine;
    json p = {{"engine", engine}};
    if (engine == "exact") {
        samples = sample_uniform(sc);
        p["approximate"] = false;
    } else if (engine == "mcmc") {
        sc.engine = SampleEngine::mcmc;
        McmcResult r = mcmc_sample(sc);
        samples = std::move(r.samples);
        p["approximate"] = true;
        p["diagnostics"] = {{"mean_range_first_half", r.diagnostics.mean_range_first_half},
                            {"mean_range_second_half", r.diagnostics.mean_range_second_half},
                            {"drift", r.diagnostics.drift()}};
    } else {
        throw precondition_error("unknown sample engine: " + engine);
    }
    json list = json::array();
    for (const auto& f : samples) list.push_back(to_flat(f));
    p["samples"] = list;
    return p;
}

json stats_payload(const Options& o) {
    const CubeDim dim(o.d);
    const Config cfg = o.config();
    json p;
    const bool exact = o.exact || (o.engine == "exact");
    if (exact) {
        const StatReport rep = range_statistics(dim);
        json probs = json::object();
        for (const auto& [i, r] : rep.exact) probs[std::to_string(i)] = exact_value(r);
        p["range"] = {{"engine", "exact"}, {"p_range", probs}, {"p_range_more_than_5", rep.more_than_5}};
        if (o.d <= 4) {
            const EdgeStatistic e = edge_C_statistic(dim);
            p["edge_C"] = {{"engine", "exact"},
                           {"value", exact_value(e.value)},
                           {"edge_invariant", e.edge_invariant},
                           {"edges_checked", e.edges_checked}};
            const MostlyConstantFractions m = mostly_constant_fraction(dim, cfg);
            p["mostly_constant"] = {{"engine", "exact"},
                                    {"even_side", exact_value(m.even_side)},
                                    {"odd_side", exact_value(m.odd_side)},
                                    {"both", exact_value(m.both)}};
        }
    } else {
        SampleConfig sc{dim, o.seed, o.n ? o.n : 10000, SampleEngine::mcmc, o.burn_in, o.thinning};
        const McmcResult r = mcmc_sample(sc);
        const StatReport rep = range_statistics(r.samples);
        json probs = json::object();
        for (const auto& [i, f] : rep.frequency)
            probs[std::to_string(i)] = {{"frequency", f}, {"std_error", rep.std_error.at(i)}};
        p["range"] = {{"engine", "mcmc"},
                      {"approximate", true},
                      {"samples", rep.samples},
                      {"p_range", probs},
                      {"p_range_more_than_5", rep.more_than_5},
                      {"drift", r.diagnostics.drift()}};
    }
    return p;
}

json approx_payload(const Options& o, bool& failed) {
    const CubeDim dim(o.d);
    if (o.sweep != "all") throw precondition_error("unknown sweep: " + o.sweep);
    if (o.d > 5) throw budget_error("approx sweep: d <= 5");
    json rows = json::array();
    std::size_t failures = 0;
    for_each_klinked_in_class(dim, 0, 2, 2, dim.M(), [&](const VertexSet& a) {
        const QuadrupleRun run = approximating_quadruple_run(a);
        const QuadValidation v = validate_quadruple(a, run.quad);
        const bool pass = v.all() && run.stage1.within_bounds(o.d) && run.stage2.within_bounds(o.d) &&
                          run.covers.f_report.meets_bound && run.covers.p_report.meets_bound;
        failures += !pass;
        rows.push_back({{"A", a.to_string()},
                        {"key", class_key(a).to_string()},
                        {"F", run.quad.F.size()},
                        {"S", run.quad.S.size()},
                        {"P", run.quad.P.size()},
                        {"Q", run.quad.Q.size()},
                        {"pass", pass},
                        {"failed", v.failures()}});
    });
    failed = failures > 0;
    return {{"engine", "exhaustive"}, {"sets", rows.size()}, {"failures", failures}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// output

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void emit_csv(const RunDocument& doc) {
    const json& p = doc.payload;
    if (doc.command == "count") {
        std::cout << "range,count\n";
        if (p.contains("range_counts"))
            for (const auto& [k, v] : p["range_counts"].items()) std::cout << k << "," << v.get<std::string>() << "\n";
        std::cout << "total," << p["total"].get<std::string>() << "\n";
    } else if (doc.command == "verify") {
        std::cout << "assertion,checked,failures\n";
        for (const auto& a : p["assertions"])
            std::cout << csv_escape(a["name"]) << "," << a["checked"] << "," << a["failures"] << "\n";
    } else if (doc.command == "sample") {
        for (const auto& s : p["samples"]) std::cout << s.get<std::string>() << "\n";
    } else if (doc.command == "stats") {
        std::cout << "range,probability\n";
        for (const auto& [k, v] : p["range"]["p_range"].items())
            std::cout << k << "," << (v.contains("exact") ? v["exact"].dump() : v["frequency"].dump()) << "\n";
        if (p.contains("edge_C")) std::cout << "edge_C," << p["edge_C"]["value"]["exact"].get<std::string>() << "\n";
    } else if (doc.command == "approx") {
        std::cout << "A,key,F,S,P,Q,pass\n";
        for (const auto& r : p["rows"])
            std::cout << csv_escape(r["A"]) << "," << csv_escape(r["key"]) << "," << r["F"] << "," << r["S"] << ","
                      << r["P"] << "," << r["Q"] << "," << r["pass"] << "\n";
    }
}

void emit(const RunDocument& doc, const std::string& format) {
    if (format == "csv" && doc.status != "error") {
        emit_csv(doc);
        return;
    }
    std::cout << doc.to_json().dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact enumeration and structural checks for homomorphisms from the Hamming cube to Z"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);
    Options o;

    auto* count = app.add_subcommand("count", "count normalized homomorphisms, by range size");
    add_common(count, o);
    auto* verify = app.add_subcommand("verify", "run an exhaustive or sampled verification suite");
    add_common(verify, o);
    verify->add_option("--suite", o.suite, "bijection, sums, isoperimetry, approximation, chains, kw")->required();
    auto* sample = app.add_subcommand("sample", "draw members of F");
    add_common(sample, o);
    sample->add_option("--burn-in", o.burn_in, "mcmc burn-in sweeps");
    sample->add_option("--thinning", o.thinning, "mcmc sweeps between samples");
    auto* stats = app.add_subcommand("stats", "range, edge and mostly-constant statistics");
    add_common(stats, o);
    stats->add_flag("--exact", o.exact, "use exact enumeration");
    stats->add_option("--burn-in", o.burn_in, "mcmc burn-in sweeps");
    stats->add_option("--thinning", o.thinning, "mcmc sweeps between samples");
    auto* approx = app.add_subcommand("approx", "approximating quadruples over all 2-linked A");
    add_common(approx, o);
    approx->add_option("--sweep", o.sweep, "which subjects (all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage_error;
    }

    RunDocument doc;
    doc.command = app.get_subcommands().front()->get_name();
    doc.config = o.echo();
    if (doc.command == "verify") doc.config["suite"] = o.suite;
    if (doc.command == "stats") doc.config["exact"] = o.exact;
    doc.started_at = utc_timestamp();
    int code = ok;
    try {
        bool failed = false;
        const auto cache = ResultCache::open(o.cache_dir);
        const bool cacheable = doc.command == "count" || (doc.command == "stats" && o.exact);
        std::optional<json> hit;
        if (cache && cacheable) hit = cache->load(doc.command, o.d, o.engine, doc.config);
        if (hit) {
            doc.payload = *hit;
            doc.cache = "hit";
        } else {
            std::vector<HeightFunction> samples;
            if (doc.command == "count") doc.payload = count_payload(o);
            else if (doc.command == "verify") doc.payload = verify_payload(o, failed);
            else if (doc.command == "sample") doc.payload = sample_payload(o, samples);
            else if (doc.command == "stats") doc.payload = stats_payload(o);
            else doc.payload = approx_payload(o, failed);
            if (cache && cacheable) {
                cache->store(doc.command, o.d, o.engine, doc.config, doc.payload);
                doc.cache = "miss";
            }
        }
        if (failed) {
            doc.status = "failed";
            code = assertion_failure;
        }
    } catch (const budget_error& e) {
        doc.status = "error";
        doc.payload = {{"error", {{"kind", "budget"}, {"message", e.what()}}}};
        code = usage_error;
    } catch (const std::invalid_argument& e) {
        doc.status = "error";
        doc.payload = {{"error", {{"kind", "usage"}, {"message", e.what()}}}};
        code = usage_error;
    }
    doc.finished_at = utc_timestamp();
    emit(doc, o.format);
    return code;
}
