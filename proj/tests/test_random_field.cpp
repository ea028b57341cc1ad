#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>

#include "vrrw/random_field.hpp"

using namespace vrrw;

// Known-answer vectors published with the Random123 reference code.
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                            {0xffffffff, 0xffffffff}),
              (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            {0xa4093822, 0x299f31d0}),
              (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomFieldTest, RangeAndDeterminism) {
    RandomField a(42), b(42), c(43);
    int differ = 0;
    for (int64_t x = -50; x <= 50; ++x)
        for (uint64_t i = 0; i < 20; ++i) {
            double u = a.uniform(x, i);
            ASSERT_GE(u, 0.0);
            ASSERT_LT(u, 1.0);
            ASSERT_EQ(u, b.uniform(x, i));
            differ += u != c.uniform(x, i);
        }
    EXPECT_EQ(differ, 101 * 20);
}

// Property: a value does not depend on which other values were drawn first.
TEST(RandomFieldTest, OrderIndependence) {
    RandomField f(7);
    std::vector<std::pair<int64_t, uint64_t>> keys;
    for (int64_t x = -5; x <= 5; ++x)
        for (uint64_t i = 0; i < 30; ++i)
            keys.emplace_back(x, i);
    std::vector<double> first;
    for (auto [x, i] : keys)
        first.push_back(f.uniform(x, i));
    std::mt19937_64 rng(1);
    std::vector<size_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t k : order)
        EXPECT_EQ(f.uniform(keys[k].first, keys[k].second), first[k]);
}

TEST(RandomFieldTest, NegativeSitesAndLargeVisitsDistinct) {
    RandomField f(3);
    EXPECT_NE(f.uniform(-1, 0), f.uniform(1, 0));
    EXPECT_NE(f.uniform(0, 1ull << 32), f.uniform(0, 0));
    EXPECT_NE(f.uniform_aux(0, 0), f.uniform(0, 0));
}

TEST(RandomFieldTest, MomentsAndBins) {
    RandomField f(2024);
    const int N = 200000;
    double s = 0, s2 = 0;
    std::vector<int> bins(10);
    for (int k = 0; k < N; ++k) {
        double u = f.uniform(k % 97 - 48, static_cast<uint64_t>(k / 97));
        s += u;
        s2 += u * u;
        ++bins[static_cast<size_t>(u * 10)];
    }
    EXPECT_NEAR(s / N, 0.5, 4 * std::sqrt(1.0 / 12 / N));
    EXPECT_NEAR(s2 / N, 1.0 / 3, 0.005);
    double chi2 = 0;
    for (int b : bins)
        chi2 += (b - N / 10.0) * (b - N / 10.0) / (N / 10.0);
    EXPECT_LT(chi2, 27.9); // 9 dof, p = 0.001
}
