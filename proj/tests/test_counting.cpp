#include <gtest/gtest.h>

#include <cmath>

#include "hcube/counting.hpp"
#include "oracles.hpp"

using namespace hcube;

namespace {

std::vector<VertexSet> sparse_sets(CubeDim dim, std::size_t k) {
    std::vector<VertexSet> out;
    for_each_combination(VertexSet::evens(dim).members(), k, [&](const std::vector<Vertex>& pick) {
        VertexSet a = VertexSet::from_range(dim, pick);
        if (is_sparse(a)) out.push_back(a);
    });
    return out;
}

} // namespace

TEST(CountBrute, Examples) {
    EXPECT_EQ(count_brute(CubeDim(1)), 2);
    EXPECT_EQ(count_brute(CubeDim(2)), 6);
    EXPECT_EQ(count_brute(CubeDim(3)), count_dp(CubeDim(3)));
    EXPECT_EQ(count_brute(CubeDim(3)), count_rank_functions(CubeDim(3)));
    EXPECT_THROW(count_brute(CubeDim(5)), budget_error);
}

TEST(CountBrute, ParallelAgreesWithSerial) {
    EXPECT_EQ(count_brute(CubeDim(4), 3), count_brute(CubeDim(4), 1));
}

TEST(CountDp, Examples) {
    EXPECT_EQ(count_dp(CubeDim(1)), 2);
    EXPECT_EQ(count_dp(CubeDim(2)), 6);
    EXPECT_EQ(count_dp(CubeDim(5)), 395094);
    EXPECT_THROW(count_dp(CubeDim(7), 64), budget_error);
}

TEST(CountByRange, Examples) {
    auto t1 = count_by_range(CubeDim(1));
    EXPECT_EQ(t1.total, 2);
    EXPECT_EQ(t1.counts.at(2), 2);
    auto t2 = count_by_range(CubeDim(2));
    EXPECT_EQ(t2.total, 6);
    EXPECT_EQ(t2.counts.at(2), 2);
    EXPECT_EQ(t2.counts.at(3), 4);
    EXPECT_EQ(t2.engine, "backtrack");
    EXPECT_THROW(count_by_range(CubeDim(6)), budget_error);
}

TEST(CountByRange, TableInvariants) {
    for (int d = 1; d <= 5; ++d) {
        auto t = count_by_range(CubeDim(d));
        BigInt sum = 0;
        for (const auto& [i, n] : t.counts) sum += n;
        EXPECT_EQ(sum, t.total);
        EXPECT_EQ(t.counts.at(1), 0);
        EXPECT_EQ(t.counts.at(2), 2);
    }
}

TEST(CountRank, Examples) {
    EXPECT_EQ(count_rank_functions(CubeDim(1)), 2);
    EXPECT_EQ(count_rank_functions(CubeDim(2)), 6);
    EXPECT_THROW(count_rank_functions(CubeDim(5)), budget_error);
}

TEST(Engines, AgreeWhereverTheyRun) {
    for (int d = 1; d <= 4; ++d) {
        CubeDim dim(d);
        const BigInt brute = count_brute(dim);
        EXPECT_EQ(count_dp(dim), brute);
        EXPECT_EQ(count_rank_functions(dim), brute);
        EXPECT_EQ(count_by_range(dim).total, brute);
        std::size_t oracle_n = 0;
        oracle::for_each_rooted_coloring(dim, [&](const std::vector<int>&) { ++oracle_n; });
        EXPECT_EQ(BigInt(oracle_n), brute);
    }
    EXPECT_EQ(count_by_range(CubeDim(5)).total, count_dp(CubeDim(5)));
}

TEST(Engines, ColorRotationSymmetry) {
    for (int d = 1; d <= 3; ++d) EXPECT_EQ(count_colorings_unrestricted(CubeDim(d)), 3 * count_brute(CubeDim(d)));
    EXPECT_EQ(count_colorings_unrestricted(CubeDim(2)), 18);  // chromatic polynomial of C_4 at 3
}

TEST(Engines, RatioNondecreasingSnapshot) {
    double prev = 0;
    const std::vector<std::pair<int, long long>> snapshot{{2, 6}, {3, 38}, {4, 990}, {5, 395094}};
    for (auto [d, n] : snapshot) {
        CubeDim dim(d);
        EXPECT_EQ(count_by_range(dim).total, n);
        const double ratio = static_cast<double>(n) / std::ldexp(1.0, static_cast<int>(dim.M()));
        EXPECT_GE(ratio, prev);
        prev = ratio;
    }
}

TEST(Families, Examples) {
    CubeDim d4(4), d3(3);
    EXPECT_THROW(build_family_5(d4, VertexSet(d4, {0b0000, 0b0011})), precondition_error);
    EXPECT_THROW(build_family_5(d3, VertexSet(d3, {0b000, 0b111})), precondition_error);
    EXPECT_THROW(build_family_5(d4, VertexSet(d4, {0})), precondition_error);
    auto f5 = build_family_5(d4, VertexSet(d4, {0b0000, 0b1111}));
    ASSERT_EQ(f5.size(), 2u);
    EXPECT_NE(f5[0][0], f5[1][0]);
    EXPECT_EQ(build_family_4(d4, VertexSet(d4, {0})).size(), 32u);
    EXPECT_EQ(build_family_4(d4, VertexSet(d4, {0b0000, 0b1111})).size(), 2u);
    EXPECT_EQ(family_4_size(d4, 1), 32);
    EXPECT_EQ(family_4_size(d4, 2), 2);
    EXPECT_EQ(family_5_size(d4, 2), 2);
}

TEST(Families, MembersValidWithPrescribedLevelSet) {
    for (int d = 4; d <= 5; ++d) {
        CubeDim dim(d);
        for (std::size_t k = 1; k <= 2; ++k)
            for (const auto& a : sparse_sets(dim, k)) {
                auto check = [&](const HeightFunction& f) {
                    VertexSet twos(dim);
                    for (Vertex v = 0; v < dim.vertex_count(); ++v)
                        if (std::abs(f[v]) == 2) twos.insert(v);
                    EXPECT_EQ(twos, a);
                    for (Vertex v = 0; v < dim.vertex_count(); ++v) EXPECT_LE(std::abs(f[v]), 2);
                };
                for (const auto& f : build_family_4(dim, a)) check(f);
                if (k >= 2)
                    for (const auto& f : build_family_5(dim, a)) {
                        check(f);
                        EXPECT_EQ(range_of(f).size(), 5u);
                    }
            }
    }
}

// Members of the one-sign family have range {0, s, 2s} exactly when every
// unconstrained odd vertex follows the sign s; otherwise range size 4.
TEST(Families, OneSignFamilyRangeSizes) {
    CubeDim d4(4);
    for (std::size_t k = 1; k <= 2; ++k)
        for (const auto& a : sparse_sets(d4, k)) {
            const std::size_t free = (VertexSet::odds(d4) - neighborhood(a)).size();
            std::size_t three = 0;
            for (const auto& f : build_family_4(d4, a)) {
                const auto r = range_of(f);
                EXPECT_TRUE(r.size() == 3 || r.size() == 4);
                three += r.size() == 3;
            }
            EXPECT_EQ(three, 2u) << a.to_string() << " free=" << free;
        }
}

TEST(Families, PairwiseDisjointAcrossSupports) {
    CubeDim d4(4);
    std::set<std::vector<int>> seen;
    std::size_t total = 0;
    for (std::size_t k = 1; k <= 2; ++k)
        for (const auto& a : sparse_sets(d4, k)) {
            auto add = [&](const std::vector<HeightFunction>& fam) {
                for (const auto& f : fam) {
                    seen.insert(std::vector<int>(f.values().begin(), f.values().end()));
                    ++total;
                }
            };
            add(build_family_4(d4, a));
            if (k == 2) add(build_family_5(d4, a));
        }
    EXPECT_EQ(seen.size(), total);
    EXPECT_GT(total, 0u);
}

TEST(Families, ExactTotalsOverSparseSupports) {
    for (int d = 4; d <= 5; ++d) {
        CubeDim dim(d);
        for (std::size_t k = 1; k <= 2; ++k) {
            const auto supports = sparse_sets(dim, k);
            BigInt sum4 = 0, sum5 = 0;
            for (const auto& a : supports) {
                sum4 += build_family_4(dim, a).size();
                if (k >= 2) sum5 += build_family_5(dim, a).size();
            }
            EXPECT_EQ(sum4, BigInt(supports.size()) * family_4_size(dim, k));
            if (k >= 2) {
                EXPECT_EQ(sum5, BigInt(supports.size()) * family_5_size(dim, k));
            }
        }
    }
}

TEST(Asymptotics, ReferenceConstants) {
    EXPECT_NEAR(static_cast<double>(AsymptoticConstants::total()), 5.43656365691809, 1e-13);
    EXPECT_NEAR(static_cast<double>(AsymptoticConstants::range4()), 2.5948850828005128, 1e-13);
    EXPECT_NEAR(static_cast<double>(AsymptoticConstants::range5()),
                2 * std::exp(1.0) - 4 * std::sqrt(std::exp(1.0)) + 2, 1e-13);
    // the three range constants add up to the total
    EXPECT_NEAR(static_cast<double>(AsymptoticConstants::range3() + AsymptoticConstants::range4() +
                                    AsymptoticConstants::range5()),
                static_cast<double>(AsymptoticConstants::total()), 1e-13);
}

TEST(Asymptotics, SmallDimensionReport) {
    auto rep = asymptotic_report(count_by_range(CubeDim(2)));
    EXPECT_DOUBLE_EQ(static_cast<double>(rep.ratio_total), 1.5);
    EXPECT_DOUBLE_EQ(static_cast<double>(rep.share_at_most_5), 1.0);
    auto rep5 = asymptotic_report(count_by_range(CubeDim(5)));
    EXPECT_NEAR(static_cast<double>(rep5.ratio_total), 395094.0 / 65536.0, 1e-12);
    EXPECT_NEAR(static_cast<double>(rep5.share_at_most_5), (395094.0 - 32.0) / 395094.0, 1e-12);
}
