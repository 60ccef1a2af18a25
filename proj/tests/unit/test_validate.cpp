#include "cdois/errors.hpp"
#include "cdois/validate.hpp"

#include <gtest/gtest.h>

using namespace cdois;

TEST(Validate, DefaultRunPasses) {
    const auto rep = validate::run_validation();
    EXPECT_TRUE(rep.passed());
    for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.group << ": " << c.name << " value=" << c.value;
    EXPECT_GE(rep.checks.size(), 15u);
}

TEST(Validate, ZeroToleranceFails) {
    validate::Options opt;
    opt.tolerance_scale = 0.0;
    const auto rep = validate::run_validation(opt);
    EXPECT_FALSE(rep.passed());
    EXPECT_GT(rep.failures(), static_cast<int>(rep.checks.size()) / 2);
}

TEST(Validate, RejectsBadOptions) {
    validate::Options opt;
    opt.tolerance_scale = -1.0;
    EXPECT_THROW(validate::run_validation(opt), DomainError);
    opt.tolerance_scale = 1.0;
    opt.paths = 10;
    EXPECT_THROW(validate::run_validation(opt), DomainError);
}
