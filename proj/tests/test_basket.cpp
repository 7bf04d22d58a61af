#include <gtest/gtest.h>

#include <random>

#include "fanoscan/basket.hpp"
#include "oracles/oracles.hpp"

using namespace fanoscan;

namespace {

Rational frac(std::int64_t n, std::int64_t d) { return Rational(BigInt(n), BigInt(d)); }

Rational from_oracle(oracle::Frac f) { return frac(f.num, f.den); }

} // namespace

TEST(Residue, Examples) {
    EXPECT_EQ(residue(5, 3), 2);
    EXPECT_EQ(residue(-1, 11), 10);
    EXPECT_EQ(residue(66, 5), 1);
}

TEST(Residue, RejectsNonPositiveModulus) {
    for (std::int64_t r : {0, -3}) {
        try {
            residue(4, r);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::invalid_modulus);
        }
    }
}

TEST(Residue, PropertyRangeAndCongruence) {
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<std::int64_t> xs(-1'000'000, 1'000'000);
    std::uniform_int_distribution<std::int64_t> rs(1, 500);
    for (int i = 0; i < 20000; ++i) {
        std::int64_t x = xs(rng);
        std::int64_t r = rs(rng);
        std::int64_t v = residue(x, r);
        ASSERT_GE(v, 0);
        ASSERT_LT(v, r);
        ASSERT_EQ((x - v) % r, 0);
    }
}

TEST(OrbifoldPoint, InvariantsNamedOnViolation) {
    auto message = [](int r, int b) {
        try {
            OrbifoldPoint p(r, b);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::invalid_point);
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message(4, 2).find("gcd(r, b) = 1"), std::string::npos);
    EXPECT_NE(message(5, 3).find("2b <= r"), std::string::npos);
    EXPECT_NE(message(1, 1).find("r >= 2"), std::string::npos);
    EXPECT_NE(message(5, 0).find("b >= 1"), std::string::npos);
    EXPECT_NO_THROW(OrbifoldPoint(11, 5));
}

TEST(GorensteinIndex, Examples) {
    EXPECT_EQ(gorenstein_index(RMultiset({2, 3, 5, 11})), 330);
    EXPECT_EQ(gorenstein_index(RMultiset()), 1);
    EXPECT_EQ(gorenstein_index(RMultiset({4, 5, 5, 7})), 140);
}

TEST(DefectSum, Examples) {
    EXPECT_EQ(defect_sum(RMultiset({2, 3, 5, 11})), frac(6559, 330));
    EXPECT_EQ(Rational(24) - defect_sum(RMultiset({2, 3, 5, 11})), frac(1361, 330));
    EXPECT_EQ(defect_sum(RMultiset()), Rational(0));
    EXPECT_EQ(defect_sum(RMultiset({4, 5, 5, 7})), frac(2829, 140));
    EXPECT_EQ(Rational(24) - defect_sum(RMultiset({4, 5, 5, 7})), frac(531, 140));
}

TEST(HalfPointSum, Examples) {
    EXPECT_EQ(half_point_sum(parse_basket("[(2,1),(3,1),(5,2),(11,1)]")), frac(1081, 660));
    EXPECT_EQ(half_point_sum(Basket()), Rational(0));
    EXPECT_EQ(half_point_sum(parse_basket("[(4,1),(5,1),(5,2),(7,3)]")), frac(625, 280));
}

TEST(RMultiset, CanonicalOrderAndContainment) {
    RMultiset a({11, 2, 5, 3});
    EXPECT_EQ(a, RMultiset({2, 3, 5, 11}));
    EXPECT_EQ(a.to_string(), "[2,3,5,11]");
    EXPECT_TRUE(RMultiset({2, 2, 3, 5}).contains(RMultiset({2, 2})));
    EXPECT_FALSE(RMultiset({2, 3, 5, 11}).contains(RMultiset({2, 2, 2, 2})));
    EXPECT_TRUE(RMultiset({2, 2, 2, 2, 7}).contains(RMultiset({2, 2, 2, 2})));
    EXPECT_TRUE(a.contains(RMultiset()));
}

TEST(BasketText, ParseCanonicalizes) {
    Basket b = parse_basket(" [ (11,1), (2,1),(5,2),(3,1) ] ");
    EXPECT_EQ(b.to_string(), "[(2,1),(3,1),(5,2),(11,1)]");
    EXPECT_EQ(b.r_multiset(), RMultiset({2, 3, 5, 11}));
    EXPECT_EQ(parse_basket("[]").size(), 0u);
    EXPECT_EQ(parse_r_multiset("[5,2,2]").to_string(), "[2,2,5]");
}

TEST(BasketText, RejectsInvariantViolations) {
    try {
        parse_basket("[(2,1),(6,3)]");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_point);
        EXPECT_NE(std::string(e.what()).find("gcd"), std::string::npos);
    }
    EXPECT_THROW(parse_basket("[(7,4)]"), Error);
    EXPECT_THROW(parse_basket("[(2,1)"), Error);
    EXPECT_THROW(parse_basket("[(2,1)] x"), Error);
    EXPECT_THROW(parse_r_multiset("[1,3]"), Error);
}

// Properties checked on every basket with r <= 7 and defect_sum < 24,
// against the fixed-width oracle.
TEST(BasketCore, AgreesWithBruteForceOnSmallBaskets) {
    auto pool = oracle::points_up_to(7);
    std::vector<std::vector<oracle::Point>> all;
    std::vector<oracle::Point> cur;
    oracle::multisets(
        pool, 64,
        [](const std::vector<oracle::Point>& pts) {
            std::vector<int> rs;
            for (auto [r, b] : pts) rs.push_back(r);
            return oracle::defect(rs) < oracle::Frac(24);
        },
        all, cur);
    ASSERT_GT(all.size(), 1000u);

    for (const auto& pts : all) {
        std::vector<OrbifoldPoint> points;
        std::vector<int> rs;
        for (auto [r, b] : pts) {
            points.emplace_back(r, b);
            rs.push_back(r);
        }
        Basket basket(points);
        RMultiset R = basket.r_multiset();
        ASSERT_EQ(gorenstein_index(R), oracle::lcm_of(rs));
        ASSERT_EQ(defect_sum(R), from_oracle(oracle::defect(rs)));
        ASSERT_EQ(half_point_sum(basket), from_oracle(oracle::half_sum(pts)));

        for (int extra : {2, 3, 5, 7}) {
            std::vector<int> grown = rs;
            grown.push_back(extra);
            RMultiset G(grown);
            ASSERT_EQ(gorenstein_index(G) % gorenstein_index(R), 0);
            ASSERT_EQ(gorenstein_index(G) % extra, 0);
            ASSERT_GE(defect_sum(G) - defect_sum(R), frac(3, 2));
        }
    }
}

TEST(HalfPointSum, SinglePointBounds) {
    for (int r = 2; r <= 60; ++r) {
        for (int b = 1; 2 * b <= r; ++b) {
            if (std::gcd(r, b) != 1) continue;
            Rational v = half_point_sum(Basket({OrbifoldPoint(r, b)}));
            EXPECT_GT(v, Rational(0));
            EXPECT_LE(v, frac(r, 8));
            EXPECT_EQ(v == frac(1, 4), r == 2 && b == 1) << r << "," << b;
        }
    }
}
