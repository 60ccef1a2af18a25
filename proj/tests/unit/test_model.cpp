#include "cdois/errors.hpp"
#include "cdois/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace cdois;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(LogLevel, Values) {
    EXPECT_EQ(log_level(0.0), 0.0);
    EXPECT_EQ(log_level(1.0), kInf);
    // -ln(0.7) to 20 digits: 0.35667494393873237891
    EXPECT_NEAR(log_level(0.3), 0.35667494393873237891, 1e-16);
    EXPECT_THROW(log_level(-0.1), DomainError);
    EXPECT_THROW(log_level(1.5), DomainError);
    EXPECT_THROW(log_level(std::nan("")), DomainError);
}

TEST(LossFromDefault, Values) {
    EXPECT_EQ(loss_from_default(0.0), 0.0);
    EXPECT_EQ(loss_from_default(kInf), 1.0);
    // 1 - e^{-0.05} = 0.048770575499285991...
    EXPECT_NEAR(loss_from_default(0.05), 0.048770575499285991, 1e-16);
    EXPECT_EQ(loss_from_default(0.4, LossSpec::Linear), 0.4);
    EXPECT_EQ(loss_from_default(3.0, LossSpec::Linear), 1.0);
    EXPECT_THROW(loss_from_default(-1.0), DomainError);
}

TEST(LossFromDefault, LogLevelIsInverse) {
    // Rounding 1 - e^{-D} costs about eps e^{D} in the recovered level.
    for (double d = 0.0; d <= 20.0; d += 0.37) {
        EXPECT_NEAR(log_level(loss_from_default(d)), d, 4e-16 * std::exp(d) + 1e-15);
    }
}

TEST(LossFromDefault, SpecsAgreeToFirstOrder) {
    for (double d = 0.0; d <= 1.0; d += 0.01) {
        const double gap = std::abs(loss_from_default(d) - loss_from_default(d, LossSpec::Linear));
        EXPECT_LE(gap, d * d / 2.0 + 1e-15);
    }
}

TEST(TrancheLoss, Values) {
    const Tranche mezz(0.03, 0.07);
    EXPECT_EQ(tranche_loss(0.0, mezz), 0.0);
    EXPECT_NEAR(tranche_loss(0.05, mezz), 0.02, 1e-15);
    EXPECT_NEAR(tranche_loss(1.0, Tranche(0.3, 1.0)), 0.7, 1e-15);
    EXPECT_THROW(tranche_loss(1.2, mezz), DomainError);
}

TEST(TrancheLoss, IndexIdentityAndAdditivity) {
    const Tranche index(0.0, 1.0);
    for (double l = 0.0; l <= 1.0; l += 0.013) {
        EXPECT_EQ(tranche_loss(l, index), l);
        const double lhs = tranche_loss(l, Tranche(0.03, 0.1)) + tranche_loss(l, Tranche(0.1, 0.42));
        EXPECT_NEAR(lhs, tranche_loss(l, Tranche(0.03, 0.42)), 1e-15);
    }
}

TEST(OutstandingNotional, Values) {
    const Tranche ss(0.3, 1.0);
    EXPECT_NEAR(outstanding_notional(0.0, ss), 0.7, 1e-15);
    EXPECT_NEAR(outstanding_notional(1.0, ss), 0.0, 1e-15);
    EXPECT_NEAR(outstanding_notional(0.4, ss), 0.6, 1e-15);
}

TEST(FairSpread, Values) {
    EXPECT_EQ(fair_spread(0.0, 3.5), 0.0);
    EXPECT_NEAR(fair_spread(0.0224707, 4.94361), 1e4 * 0.0224707 / 4.94361, 1e-12);
    EXPECT_THROW(fair_spread(0.01, 0.0), DomainError);
}

TEST(Tranche, LevelsAndValidation) {
    const Tranche t(0.3, 1.0);
    EXPECT_NEAR(t.ha(), -std::log(0.7), 1e-15);
    EXPECT_EQ(t.hd(), kInf);
    EXPECT_EQ(t.label(), "0.30-1.00");
    EXPECT_TRUE(Tranche(0.1, 0.1).degenerate());
    EXPECT_THROW(Tranche(0.5, 0.2), DomainError);
    EXPECT_THROW(Tranche(-0.1, 0.2), DomainError);
    EXPECT_THROW(Tranche(1.0, 1.0), DomainError);
    EXPECT_THROW(Tranche(0.1, 1.1), DomainError);
}

TEST(ModelParams, Validation) {
    const auto p = ModelParams::from_mean_jump(0.05, 0.1);
    EXPECT_DOUBLE_EQ(p.lambda(), 10.0);
    EXPECT_DOUBLE_EQ(p.mu(), 0.1);
    EXPECT_THROW(ModelParams(0.0, 10.0), DomainError);
    EXPECT_THROW(ModelParams(0.05, -1.0), DomainError);
    EXPECT_THROW(ModelParams(kInf, 1.0), DomainError);
}

TEST(Contract, Grid) {
    const Contract c(5.0, 0.0);
    EXPECT_EQ(c.grid_steps(), 20);
    EXPECT_DOUBLE_EQ(c.grid_step(), 0.25);
    EXPECT_EQ(Contract(5.0, 0.0, 252).grid_steps(), 1260);
    EXPECT_EQ(Contract(0.1, 0.0, 1).grid_steps(), 1);
    EXPECT_THROW(Contract(-1.0, 0.0), DomainError);
    EXPECT_THROW(Contract(5.0, -0.01), DomainError);
    EXPECT_THROW(Contract(5.0, 0.0, 0), DomainError);
}

TEST(StandardTranches, Preset) {
    const auto t = standard_tranches();
    ASSERT_EQ(t.size(), 7u);
    const double expect[7][2] = {{0, .03}, {.03, .07}, {.07, .10}, {.10, .15}, {.15, .30}, {.30, 1}, {0, 1}};
    for (int k = 0; k < 7; ++k) {
        EXPECT_EQ(t[k].attach(), expect[k][0]);
        EXPECT_EQ(t[k].detach(), expect[k][1]);
    }
}

TEST(LossSpec, Names) {
    EXPECT_EQ(loss_spec_from_string("linear"), LossSpec::Linear);
    EXPECT_EQ(to_string(LossSpec::Exponential), "exponential");
    EXPECT_THROW(loss_spec_from_string("cubic"), DomainError);
}

TEST(Units, BasisPoints) { EXPECT_DOUBLE_EQ(to_bp(0.0224707), 224.707); }
