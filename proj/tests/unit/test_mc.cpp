#include "cdois/analytic.hpp"
#include "cdois/errors.hpp"
#include "cdois/importance.hpp"
#include "cdois/mc.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cdois;
using namespace cdois::mc;

namespace {

const ModelParams kStd{0.05, 10.0};
constexpr double kM = 5.0;

Path make_path(std::vector<double> times, std::vector<double> sizes) {
    Path p;
    p.jump_times = std::move(times);
    p.jump_sizes = std::move(sizes);
    return p;
}

// Slow oracle: loss at every grid date by scanning the whole path, then the
// two leg sums term by term.
LegValues naive_value(const Path& p, const Tranche& tr, const Contract& c, LossSpec spec) {
    const int k_max = c.grid_steps();
    const double dt = c.maturity() / k_max;
    auto tranche_loss_at = [&](double t) {
        double level = 0.0;
        for (std::size_t i = 0; i < p.jumps(); ++i) {
            if (p.jump_times[i] <= t) level += p.jump_sizes[i];
        }
        return tranche_loss(loss_from_default(level, spec), tr);
    };
    double def = 0.0, prem = 0.0, prev = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        const double t = dt * k;
        const double l = tranche_loss_at(t);
        const double disc = std::exp(-c.rate() * t);
        def += disc * (l - prev);
        prem += disc * (tr.width() - l) * dt;
        prev = l;
    }
    return {def, prem};
}

SimConfig base_config(std::int64_t n) {
    SimConfig cfg;
    cfg.n_paths = n;
    cfg.seed = 20240531;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST(GeneratePath, TinyIntensityGivesEmptyPath) {
    const MeasurePair mp{kStd, ModelParams(1e-9 / kM, 10.0)};
    for (int i = 0; i < 1000; ++i) {
        auto s = path_stream(1, i);
        const Path p = generate_path(s, mp, kM);
        ASSERT_EQ(p.jumps(), 0u);
        EXPECT_NEAR(p.rn_weight, std::exp(-(0.05 - 1e-9 / kM) * kM), 1e-15);
    }
}

TEST(GeneratePath, IdenticalMeasuresHaveUnitWeight) {
    const MeasurePair mp{kStd, kStd};
    for (int i = 0; i < 10000; ++i) {
        auto s = path_stream(3, i);
        EXPECT_EQ(generate_path(s, mp, kM).rn_weight, 1.0);
    }
}

TEST(GeneratePath, JumpCountIsPoisson) {
    const ModelParams alt(0.4, 6.0);
    auto cfg = base_config(1000000);
    cfg.altered = alt;
    cfg.tranches = {Tranche(0.0, 1.0)};
    const auto res = run_simulation(cfg);
    const double lam = alt.rho() * kM;
    EXPECT_NEAR(res.jump_count.mean, lam, 3.0 * std::sqrt(lam / 1e6));
    EXPECT_NEAR(res.jump_count.variance(), lam, 0.01 * lam);
}

TEST(GeneratePath, WeightAuditAgainstClosedForm) {
    const MeasurePair mp{kStd, ModelParams(0.25, 1.0 / 0.3)};
    const PathSampler sampler(mp, kM);
    Path p;
    for (int i = 0; i < 10000; ++i) {
        auto s = path_stream(11, i);
        sampler.draw(s, p);
        for (std::size_t k = 1; k < p.jumps(); ++k) ASSERT_GT(p.jump_times[k], p.jump_times[k - 1]);
        if (p.jumps() > 0) {
            ASSERT_LE(p.jump_times.back(), kM);
        }
        const double w = importance::rn_weight(static_cast<long>(p.jumps()), p.total_default(), kM, mp);
        ASSERT_NEAR(p.rn_weight, w, 1e-12 * w) << i;
    }
}

TEST(ValuePath, EmptyPath) {
    for (const double r : {0.0, 0.03}) {
        const Contract c(kM, r);
        const PaymentGrid grid(c);
        const auto v = value_path(Path{}, standard_tranches(), grid);
        double annuity = 0.0;
        for (int k = 1; k <= 20; ++k) annuity += 0.25 * std::exp(-r * 0.25 * k);
        for (std::size_t t = 0; t < v.size(); ++t) {
            EXPECT_EQ(v[t].def, 0.0);
            EXPECT_NEAR(v[t].prem, standard_tranches()[t].width() * annuity, 1e-14);
        }
    }
}

TEST(ValuePath, SaturatingJump) {
    const PaymentGrid grid(Contract(kM, 0.0));
    const auto v = value_path(make_path({2.5}, {10.0}), {Tranche(0.3, 1.0)}, grid);
    EXPECT_NEAR(v[0].def, 0.7 - std::exp(-10.0), 1e-15);
    // A jump at 2.5 falls in period 10, so 0.7 is outstanding for 9 quarters
    // and e^{-10} for the remaining 11.
    EXPECT_NEAR(v[0].prem, 0.7 * 2.25 + std::exp(-10.0) * 2.75, 1e-14);
}

TEST(ValuePath, MatchesNaiveOracle) {
    const Path paths[] = {
        make_path({0.3, 1.1, 1.12, 3.9, 4.99}, {0.02, 0.05, 0.4, 0.01, 0.7}),
        make_path({0.01}, {0.04}),
        make_path({2.0, 2.7}, {0.2, 3.0}),
        make_path({0.25, 0.5, 4.75}, {0.06, 0.03, 0.2}),
    };
    for (const auto spec : {LossSpec::Exponential, LossSpec::Linear}) {
        for (const double r : {0.0, 0.03}) {
            for (const int ppy : {1, 4, 12}) {
                const Contract c(kM, r, ppy);
                const PaymentGrid grid(c);
                for (const auto& p : paths) {
                    const auto tr = standard_tranches();
                    const auto v = value_path(p, tr, grid, spec);
                    for (std::size_t t = 0; t < tr.size(); ++t) {
                        const auto o = naive_value(p, tr[t], c, spec);
                        EXPECT_NEAR(v[t].def, o.def, 1e-14) << tr[t].label() << " r=" << r << " ppy=" << ppy;
                        EXPECT_NEAR(v[t].prem, o.prem, 1e-13) << tr[t].label() << " r=" << r << " ppy=" << ppy;
                    }
                }
            }
        }
    }
}

TEST(ValuePath, DefaultLegIsGridInvariantWithoutDiscounting) {
    const MeasurePair mp{kStd, ModelParams(0.5, 3.0)};
    Path p;
    const PathSampler sampler(mp, kM);
    for (int i = 0; i < 2000; ++i) {
        auto s = path_stream(17, i);
        sampler.draw(s, p);
        const auto v4 = value_path(p, standard_tranches(), PaymentGrid(Contract(kM, 0.0, 4)));
        const auto v12 = value_path(p, standard_tranches(), PaymentGrid(Contract(kM, 0.0, 12)));
        const auto v252 = value_path(p, standard_tranches(), PaymentGrid(Contract(kM, 0.0, 252)));
        for (std::size_t t = 0; t < v4.size(); ++t) {
            ASSERT_EQ(v4[t].def, v12[t].def);
            ASSERT_EQ(v4[t].def, v252[t].def);
            ASSERT_GE(v4[t].def, 0.0);
            ASSERT_LE(v4[t].def, standard_tranches()[t].width() + 1e-15);
            ASSERT_LE(v4[t].prem, standard_tranches()[t].width() * kM + 1e-12);
        }
    }
}

TEST(RunSimulation, UnweightedIndexMean) {
    auto cfg = base_config(1000000);
    const auto res = run_simulation(cfg);
    const auto& idx = res.tranches.back();
    EXPECT_NEAR(idx.def.mean(), -std::expm1(-0.25 / 11.0), 3.0 * idx.def.se());
    EXPECT_EQ(res.weight.mean, 1.0);
}

TEST(RunSimulation, SecondMomentMatchesAnalyticUnderIdenticalMeasures) {
    auto cfg = base_config(1000000);
    const auto res = run_simulation(cfg);
    for (const auto& ts : res.tranches) {
        const auto rep = importance::variance_report(ts.tranche, kM, cfg.measures());
        EXPECT_NEAR(ts.def.variance(), rep.variance_altered, 3.0 * ts.def.variance_se()) << ts.tranche.label();
    }
}

TEST(RunSimulation, ReweightedRunsAreUnbiasedAndReduceVariance) {
    auto cfg = base_config(1000000);
    cfg.tranches = {Tranche(0.3, 1.0)};
    const auto plain = run_simulation(cfg);
    cfg.altered = ModelParams(0.05, 1.0 / 0.28);
    const auto is = run_simulation(cfg);
    const double exact = analytic::def_pv(cfg.tranches[0], cfg.contract, kStd);
    EXPECT_NEAR(is.tranches[0].def.mean(), exact, 3.0 * is.tranches[0].def.se());
    const double ratio = is.tranches[0].def.variance() / plain.tranches[0].def.variance();
    EXPECT_NEAR(ratio, 0.14, 0.03);
    const double w_se = std::sqrt(is.weight.variance() / 1e6);
    EXPECT_NEAR(is.weight.mean, 1.0, 3.0 * w_se);
}

TEST(RunSimulation, ReproducibleAndChunkingInvariant) {
    auto cfg = base_config(50000);
    cfg.altered = ModelParams(0.22, 6.0);
    cfg.contract = Contract(kM, 0.02);
    const auto a = run_simulation(cfg);
    const auto b = run_simulation(cfg);
    for (std::size_t t = 0; t < a.tranches.size(); ++t) {
        EXPECT_EQ(a.tranches[t].def.mean(), b.tranches[t].def.mean());
        EXPECT_EQ(a.tranches[t].def.variance(), b.tranches[t].def.variance());
        EXPECT_EQ(a.tranches[t].prem.mean(), b.tranches[t].prem.mean());
    }
    for (const std::int64_t chunk : {1000, 4096, 50000}) {
        for (const int threads : {1, 3}) {
            auto c2 = cfg;
            c2.chunk_size = chunk;
            c2.threads = threads;
            const auto r = run_simulation(c2);
            for (std::size_t t = 0; t < a.tranches.size(); ++t) {
                const auto& x = a.tranches[t];
                const auto& y = r.tranches[t];
                EXPECT_NEAR(y.def.mean(), x.def.mean(), 1e-10 * std::abs(x.def.mean()));
                EXPECT_NEAR(y.def.variance(), x.def.variance(), 1e-10 * x.def.variance());
                EXPECT_NEAR(y.prem.mean(), x.prem.mean(), 1e-10 * x.prem.mean());
                EXPECT_NEAR(y.prem.variance(), x.prem.variance(), 1e-10 * x.prem.variance());
            }
            EXPECT_NEAR(r.weight.mean, a.weight.mean, 1e-10);
        }
    }
}

TEST(RunSimulation, PrefixOfLongerRunUsesSamePaths) {
    // Path i depends only on (seed, i): a longer run extends a shorter one.
    auto cfg = base_config(1);
    cfg.tranches = {Tranche(0.0, 1.0)};
    cfg.altered = ModelParams(0.5, 3.0);
    const auto one = run_simulation(cfg);
    auto s = path_stream(cfg.seed, 0);
    const Path p = generate_path(s, cfg.measures(), kM);
    const auto v = value_path(p, cfg.tranches, PaymentGrid(cfg.contract));
    EXPECT_EQ(one.tranches[0].def.mean(), p.rn_weight * v[0].def);
}

TEST(SimConfig, Validation) {
    auto cfg = base_config(0);
    EXPECT_THROW(run_simulation(cfg), DomainError);
    cfg = base_config(10);
    cfg.chunk_size = 0;
    EXPECT_THROW(run_simulation(cfg), DomainError);
    cfg = base_config(10);
    cfg.threads = -2;
    EXPECT_THROW(run_simulation(cfg), DomainError);
    cfg = base_config(10);
    cfg.contract = Contract(0.0, 0.0);
    EXPECT_THROW(run_simulation(cfg), DomainError);
}

TEST(LossSurface, Properties) {
    auto cfg = base_config(200000);
    cfg.altered = ModelParams(0.3, 10.0);
    const auto s = loss_surface(cfg, {10, 25});
    ASSERT_EQ(s.time_bins(), 10);
    ASSERT_EQ(s.loss_bins(), 25);
    for (int t = 1; t < s.time_bins(); ++t) EXPECT_GE(s.column_mean(t), s.column_mean(t - 1) - 1e-4);
    // Column mass at maturity estimates P(D_M > 0) = 1 - e^{-rho M} under the real measure.
    const double p = -std::expm1(-0.05 * kM);
    EXPECT_NEAR(s.column_mass(9), p, 0.01 * p);

    auto plain = base_config(200000);
    const auto s2 = loss_surface(plain, {10, 25});
    const double se = std::sqrt(p * (1 - p) / 200000.0);
    EXPECT_NEAR(s2.column_mass(9), p, 3.0 * se);

    auto none = base_config(10000);
    none.altered = ModelParams(1e-12, 10.0);
    const auto s3 = loss_surface(none, {5, 5});
    for (const double m : s3.mass) EXPECT_EQ(m, 0.0);
}
