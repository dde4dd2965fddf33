#include <gtest/gtest.h>

#include "bankpool/engine.hpp"
#include "bankpool/presets.hpp"

using namespace bankpool;

namespace {

ScenarioConfig seeded(std::string_view preset, std::uint64_t seed, int periods = 50) {
    auto c = preset_config(preset);
    c.seed = seed;
    c.periods = periods;
    return c;
}

// Every stochastic scale at zero: no payments, lending, repayment or interest.
ScenarioConfig frozen(std::uint64_t seed) {
    ScenarioConfig c;
    c.seed = seed;
    c.xi1 = c.xi2 = 0.0;
    c.absorption = c.repayment = TriangularParams::point(0.0);
    c.rates.a1 = c.rates.a2 = c.rates.l1 = c.rates.l2 = c.rates.interbank = TriangularParams::point(0.0);
    c.rates.guarantee_spread = 0.0;
    return c;
}

}  // namespace

TEST(Engine, ZeroPeriodsGivesInitialSnapshotOnly) {
    const auto tr = run_scenario(seeded("baseline_perfect", 1, 0));
    EXPECT_TRUE(tr.periods.empty());
    EXPECT_EQ(tr.initial.size(), 10u);
    EXPECT_EQ(tr.max_identity_residual, 0.0);
}

TEST(Engine, FrozenConfigIsAFixedPoint) {
    const auto c = frozen(9);
    const auto tr = run_scenario(c);
    ASSERT_EQ(tr.periods.size(), 50u);
    for (const auto& p : tr.periods) EXPECT_EQ(p.banks, tr.initial);
}

TEST(Engine, SameConfigSameTrace) {
    const auto c = seeded("baseline_smooth", 21, 15);
    const auto a = run_scenario(c);
    const auto b = run_scenario(c);
    ASSERT_EQ(a.periods.size(), b.periods.size());
    for (std::size_t t = 0; t < a.periods.size(); ++t) {
        EXPECT_EQ(a.periods[t].banks, b.periods[t].banks);
        EXPECT_EQ(a.periods[t].profit, b.periods[t].profit);
    }
}

TEST(Engine, PerPhaseChecksPassOnBaseline) {
    for (auto name : {"baseline_perfect", "baseline_smooth", "baseline_distressed"}) {
        const auto tr = run_scenario(seeded(name, 2), CheckMode::per_phase);
        EXPECT_LT(tr.max_identity_residual, 1e-9) << name;
    }
}

TEST(Engine, DistressedPoolingNeedsAssistanceRepeatedly) {
    const auto m = summarise(run_scenario(seeded("baseline_distressed", 3)));
    EXPECT_GT(m.guaranteed_period_share, 0.5);
}

TEST(Engine, PerfectPoolingRarelyNeedsAssistance) {
    const auto perfect = summarise(run_scenario(seeded("baseline_perfect", 3)));
    const auto distressed = summarise(run_scenario(seeded("baseline_distressed", 3)));
    EXPECT_LT(perfect.cumulative_guarantees, 0.25 * distressed.cumulative_guarantees);
    EXPECT_LT(perfect.guaranteed_period_share, distressed.guaranteed_period_share);
}

TEST(Engine, RunPeriodRefusesToPassTheHorizon) {
    auto c = seeded("baseline_perfect", 1, 1);
    auto s = initial_state(c);
    run_period(s, c);
    EXPECT_THROW(run_period(s, c), InvalidParams);
}

TEST(Engine, ScenarioRequiresSeed) {
    auto c = preset_config("baseline_perfect");
    EXPECT_THROW(run_scenario(c), ConfigError);
}

TEST(Engine, AuditCatchesTampering) {
    auto c = seeded("baseline_perfect", 1, 2);
    auto s = initial_state(c);
    run_period(s, c);
    s.banks[0].a1 += 1.0;
    EXPECT_THROW(audit_state(s, c, "test"), ConsistencyError);
}

TEST(Engine, AggregatesMatchBankSums) {
    const auto tr = run_scenario(seeded("baseline_distressed", 5, 10));
    for (const auto& p : tr.periods) {
        const auto t = sum_sheets(p.banks);
        EXPECT_EQ(t, p.totals.totals);
        double profit = 0.0;
        for (double x : p.profit) profit += x;
        EXPECT_DOUBLE_EQ(profit, p.totals.profit);
    }
}

TEST(Ensemble, SingleSeedMatchesSingleRun) {
    const auto c = seeded("baseline_perfect", 8, 10);
    const auto e = run_ensemble(c, 1);
    const auto m = summarise(run_scenario(c));
    ASSERT_EQ(e.runs.size(), 1u);
    EXPECT_EQ(e.runs[0].cumulative_customer_lending, m.cumulative_customer_lending);
    EXPECT_EQ(e.runs[0].terminal_equity, m.terminal_equity);
    EXPECT_EQ(e.stats.mean(9, 0), e.stats.median(9, 0));
}

TEST(Ensemble, RejectsZeroSeeds) {
    EXPECT_THROW(run_ensemble(seeded("baseline_perfect", 1, 1), 0), InvalidParams);
}

TEST(Ensemble, PhiSweepSharesSeeds) {
    const auto sweep = compare_phi(seeded("baseline_perfect", 4, 5), {0.0, 0.8}, 3);
    ASSERT_EQ(sweep.size(), 2u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(sweep[0].runs[k].seed, sweep[1].runs[k].seed);
    EXPECT_EQ(sweep[1].config.phi, 0.8);
}

TEST(Ensemble, MemberSeedsAreDistinct) {
    EXPECT_EQ(member_seed(42, 0), 42u);
    EXPECT_NE(member_seed(42, 1), member_seed(42, 2));
}
