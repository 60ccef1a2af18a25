#include "cdois/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace cdois;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::apply({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::apply({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(PathStream, DeterministicAndDistinct) {
    PathStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::set<double> seen;
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_NE(u, c.uniform());
        EXPECT_NE(u, d.uniform());
        seen.insert(u);
    }
    EXPECT_EQ(seen.size(), 100u);
    EXPECT_EQ(a.blocks_used(), 50u);
}

TEST(PathStream, HighPathIndicesUseUpperWords) {
    PathStream lo(1, 5), hi(1, (std::uint64_t{1} << 32) + 5);
    EXPECT_NE(lo.uniform(), hi.uniform());
}

TEST(PathStream, UniformMomentsAndRange) {
    const int n = 1000000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        PathStream st(2024, static_cast<std::uint64_t>(i));
        const double u = st.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    const double mean = s / n;
    EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(s2 / n - mean * mean, 1.0 / 12.0, 4.0 * std::sqrt(1.0 / 180.0 / n));
}

TEST(PathStream, ExponentialMean) {
    PathStream st(9, 0);
    const int n = 400000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += st.exponential(4.0);
    EXPECT_NEAR(s / n, 0.25, 4.0 * 0.25 / std::sqrt(n));
}
