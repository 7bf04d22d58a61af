#include <gtest/gtest.h>

#include <set>

#include "fanoscan/index_search.hpp"
#include "fanoscan/table_io.hpp"
#include "oracles/oracles.hpp"

using namespace fanoscan;

namespace {

Rational frac(std::int64_t n, std::int64_t d) { return Rational(BigInt(n), BigInt(d)); }

SearchConfig config_for(Rational b, std::int64_t q_min) {
    SearchConfig c;
    c.slope_coeff = std::move(b);
    c.q_min = q_min;
    return c;
}

std::string row(const CandidateRecord& r) {
    return r.basket->to_string() + " " + r.rX_c1_cubed().to_string() + " " + r.q.str();
}

} // namespace

TEST(Step1, ContainsKnownPairs) {
    auto all = enumerate_r_multisets(1);
    auto has = [&](const RMultiset& rs, const Rational& c2c1) {
        return std::find(all.begin(), all.end(), RMultisetCandidate{rs, c2c1}) != all.end();
    };
    EXPECT_TRUE(has(RMultiset({2, 3, 5, 11}), frac(1361, 330)));
    EXPECT_TRUE(has(RMultiset(), Rational(24)));
    EXPECT_EQ(all.front().r_multiset, RMultiset());
}

TEST(Step1, MatchesRecursiveOracle) {
    auto oracle_sets = oracle::step1(1);
    auto all = enumerate_r_multisets(1);
    ASSERT_EQ(all.size(), oracle_sets.size());
    EXPECT_EQ(all.size(), 2141u);
    std::set<std::vector<int>> seen;
    for (std::size_t i = 0; i < all.size(); ++i) {
        auto entries = all[i].r_multiset.entries();
        std::vector<int> got(entries.begin(), entries.end());
        ASSERT_EQ(got, oracle_sets[i]);
        ASSERT_TRUE(seen.insert(got).second);
        ASSERT_EQ(all[i].c2c1, Rational(24) - defect_sum(all[i].r_multiset));
        ASSERT_GT(all[i].c2c1, Rational(0));
        if (i) {
            ASSERT_LT(all[i - 1].r_multiset, all[i].r_multiset);
        }
    }
}

TEST(Step1, LargerChiStillMatchesOracle) {
    auto all = enumerate_r_multisets(2);
    EXPECT_EQ(all.size(), oracle::step1(2).size());
}

TEST(Step2, ContainsTableRecords) {
    auto recs = step2_candidates(config_for(Rational(4), 61));
    auto find = [&](std::int64_t q) {
        return std::find_if(recs.begin(), recs.end(), [&](const CandidateRecord& r) {
            return r.r_multiset == RMultiset({2, 3, 5, 11}) && r.q == q && r.n == 1;
        });
    };
    auto it71 = find(71);
    ASSERT_NE(it71, recs.end());
    EXPECT_EQ(it71->c2c1, frac(1361, 330));
    EXPECT_EQ(it71->c1_cubed, frac(5041, 330));
    auto it73 = find(73);
    ASSERT_NE(it73, recs.end());
    EXPECT_EQ(it73->c1_cubed, frac(5329, 330));
    EXPECT_FALSE(it73->basket);
    EXPECT_EQ(recs.size(), 284u);
}

TEST(Step2, OrderedByMultisetThenQThenN) {
    auto recs = step2_candidates(config_for(Rational(4), 33));
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& a = recs[i - 1];
        const auto& b = recs[i];
        ASSERT_TRUE(std::tie(a.r_multiset, a.q, a.n) < std::tie(b.r_multiset, b.q, b.n));
    }
}

TEST(Step2, EmptyWhenQMinIsUnreachable) {
    BigInt max_limit = 0;
    for (const auto& item : enumerate_r_multisets(1)) {
        BigInt lim = (Rational(4) * Rational(gorenstein_index(item.r_multiset)) * item.c2c1).floor();
        if (lim > max_limit) max_limit = lim;
    }
    SearchConfig c = config_for(Rational(4), 1);
    c.q_min = boost::multiprecision::sqrt(max_limit) + 1;
    EXPECT_TRUE(step2_candidates(c).empty());
    EXPECT_TRUE(run_full_search(c).empty());
}

TEST(Step3, AssignsTableBaskets) {
    CandidateRecord r67{RMultiset({2, 3, 5, 11}), std::nullopt, frac(1361, 330), frac(4489, 330), 67, 330, 1,
                        std::nullopt};
    auto b67 = step3_assign_baskets(r67, 1);
    Basket want67 = parse_basket("[(2,1),(3,1),(5,1),(11,2)]");
    ASSERT_NE(std::find(b67.begin(), b67.end(), want67), b67.end());
    EXPECT_EQ(chi_minus_K(r67.c1_cubed, 1, want67), BigInt(8));

    CandidateRecord r73 = r67;
    r73.q = 73;
    r73.c1_cubed = frac(5329, 330);
    auto b73 = step3_assign_baskets(r73, 1);
    EXPECT_NE(std::find(b73.begin(), b73.end(), parse_basket("[(2,1),(3,1),(5,1),(11,3)]")), b73.end());
}

TEST(Step3, ForcedSinglePoint) {
    CandidateRecord rec{RMultiset({2}), std::nullopt, Rational(24) - frac(3, 2), Rational(1), 1, 2, 2, std::nullopt};
    EXPECT_TRUE(step3_assign_baskets(rec, 1).empty());
    rec.c1_cubed = frac(1, 2);
    EXPECT_EQ(step3_assign_baskets(rec, 1).size(), 1u);
}

TEST(Step3, RepeatedOrdersProduceEachMultisetOnce) {
    // Three 7's: b in {1,2,3} chosen as a multiset -> C(5,3) = 10 candidates.
    CandidateRecord rec{RMultiset({7, 7, 7}), std::nullopt, Rational(0), Rational(0), 1, 7, 0, std::nullopt};
    std::size_t with_chi = 0;
    for (std::int64_t num = 0; num < 14; ++num) {
        rec.c1_cubed = frac(num, 7);
        auto baskets = step3_assign_baskets(rec, 1);
        std::set<Basket> unique(baskets.begin(), baskets.end());
        ASSERT_EQ(unique.size(), baskets.size());
        ASSERT_TRUE(std::is_sorted(baskets.begin(), baskets.end()));
        with_chi += baskets.size();
    }
    // Independent count over the 10 weight multisets.
    std::size_t expected = 0;
    std::vector<int> bs{1, 2, 3};
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b)
            for (int c = b; c < 3; ++c) {
                oracle::Frac h = oracle::half_sum({{7, bs[a]}, {7, bs[b]}, {7, bs[c]}});
                for (std::int64_t num = 0; num < 14; ++num) {
                    oracle::Frac v = oracle::Frac(num, 14) + oracle::Frac(3) - h;
                    if (v.den == 1 && v.num >= 0) ++expected;
                }
            }
    EXPECT_EQ(with_chi, expected);
}

TEST(Postfilter, DropsOnlyTheLargestRow) {
    auto rows = run_full_search(config_for(Rational(4), 61));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_GT(rows[3].c1_cubed / rows[3].c2c1, frac(21316, 5471));
    EXPECT_EQ(rows[3].c1_cubed / rows[3].c2c1, frac(5329, 1361));
    auto kept = km_postfilter(rows);
    ASSERT_EQ(kept.size(), 3u);
    EXPECT_EQ(kept[0].q, 61);
    EXPECT_EQ(kept[1].q, 67);
    EXPECT_EQ(kept[2].q, 71);
    EXPECT_TRUE(km_postfilter({}).empty());
}

TEST(FullSearch, TightBoundsGiveSingleRow) {
    for (const Rational& b : {Rational(3), frac(16, 5)}) {
        auto rows = run_full_search(config_for(b, 61));
        ASSERT_EQ(rows.size(), 1u) << b;
        EXPECT_EQ(rows[0].basket->to_string(), "[(2,1),(3,1),(5,2),(11,1)]");
        EXPECT_EQ(rows[0].q, 61);
        EXPECT_EQ(rows[0].rX_c1_cubed(), Rational(3721));
    }
}

TEST(FullSearch, ReproducesLargeIndexTable) {
    auto rows = run_full_search(config_for(Rational(4), 61));
    std::vector<std::string> got;
    for (const auto& r : rows) got.push_back(row(r));
    EXPECT_EQ(got, (std::vector<std::string>{
                       "[(2,1),(3,1),(5,2),(11,1)] 3721 61",
                       "[(2,1),(3,1),(5,1),(11,2)] 4489 67",
                       "[(2,1),(3,1),(5,2),(11,1)] 5041 71",
                       "[(2,1),(3,1),(5,1),(11,3)] 5329 73",
                   }));
    for (const auto& r : rows) {
        EXPECT_EQ(r.r_X, 330);
        EXPECT_EQ(r.rX_c2c1(), Rational(1361));
        EXPECT_EQ(r.n, 1);
    }
    EXPECT_EQ(*rows[0].chi_minus_K, 7);
    EXPECT_EQ(*rows[1].chi_minus_K, 8);
    EXPECT_EQ(*rows[2].chi_minus_K, 9);
}

TEST(FullSearch, StatsExposeIntermediateCounts) {
    auto result = run_search(config_for(Rational(4), 61));
    EXPECT_EQ(result.stats.step1, 2141u);
    EXPECT_EQ(result.stats.step1_required, 2141u);
    EXPECT_EQ(result.stats.step2, 284u);
    EXPECT_EQ(result.stats.step3, 4u);
    EXPECT_EQ(result.stats.emitted, 4u);
}

TEST(FullSearch, MonotoneInSlopeCoefficient) {
    for (std::int64_t q_min : {20, 40, 61}) {
        auto r3 = run_full_search(config_for(Rational(3), q_min));
        auto r165 = run_full_search(config_for(frac(16, 5), q_min));
        auto r4 = run_full_search(config_for(Rational(4), q_min));
        for (const auto& r : r3) ASSERT_NE(std::find(r165.begin(), r165.end(), r), r165.end());
        for (const auto& r : r165) ASSERT_NE(std::find(r4.begin(), r4.end(), r), r4.end());
        EXPECT_LE(r3.size(), r165.size());
        EXPECT_LE(r165.size(), r4.size());
    }
}

TEST(FullSearch, DeterministicAcrossWorkerCounts) {
    SearchConfig c = config_for(Rational(4), 25);
    std::string one = render_records(run_full_search(c), OutputFormat::csv);
    for (unsigned w : {2u, 3u, 8u}) {
        c.workers = w;
        EXPECT_EQ(render_records(run_full_search(c), OutputFormat::csv), one) << w;
    }
}

TEST(FullSearch, EveryRecordSatisfiesInvariants) {
    SearchConfig c = config_for(Rational(4), 20);
    auto rows = run_full_search(c);
    ASSERT_FALSE(rows.empty());
    for (const auto& r : rows) EXPECT_TRUE(record_breaches(r, c).empty()) << row(r);
}

TEST(FullSearch, InvalidConfig) {
    for (const Rational& b : {frac(33, 10), Rational(5), Rational(0)}) {
        try {
            run_full_search(config_for(b, 61));
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::invalid_config);
        }
    }
    SearchConfig c;
    c.chi = 0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(RecordBreaches, FlagsCorruption) {
    SearchConfig c = config_for(Rational(4), 61);
    auto rows = run_full_search(c);
    CandidateRecord bad = rows[0];
    bad.c1_cubed = frac(3722, 330);
    auto breaches = record_breaches(bad, c);
    EXPECT_FALSE(breaches.empty());
    bad = rows[0];
    bad.basket = parse_basket("[(2,1),(3,1),(5,1),(11,1)]");
    EXPECT_FALSE(record_breaches(bad, c).empty());
}

TEST(NonGorenstein, MaximumIndexIs45) {
    auto rows = non_gorenstein_search();
    ASSERT_FALSE(rows.empty());
    BigInt max_q = 0;
    for (const auto& r : rows) {
        max_q = std::max(max_q, r.q);
        EXPECT_TRUE(passes_required_subsets(r.r_multiset, kawakita_subsets()));
        EXPECT_GE(r.q, 33);
    }
    EXPECT_EQ(max_q, 45);
    std::vector<CandidateRecord> top;
    for (const auto& r : rows)
        if (r.q == 45) top.push_back(r);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0].basket->to_string(), "[(4,1),(5,1),(5,2),(7,3)]");
    EXPECT_EQ(top[0].r_X, 140);
    EXPECT_EQ(top[0].rX_c2c1(), Rational(531));
    EXPECT_EQ(top[0].rX_c1_cubed(), Rational(2025));
    EXPECT_EQ(*top[0].chi_minus_K, 8);
}

TEST(RequiredSubsets, MultiplicityAware) {
    auto k = kawakita_subsets();
    EXPECT_FALSE(passes_required_subsets(RMultiset({2, 3, 5, 11}), k));
    EXPECT_FALSE(passes_required_subsets(RMultiset({2, 2, 2, 5}), k));
    EXPECT_TRUE(passes_required_subsets(RMultiset({2, 2, 2, 2, 5}), k));
    EXPECT_TRUE(passes_required_subsets(RMultiset({4, 5, 5, 7}), k));
    EXPECT_TRUE(passes_required_subsets(RMultiset({2, 3, 5}), {}));
}
