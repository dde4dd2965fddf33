// Invariants checked over many seeds and randomly shaped systems.

#include <gtest/gtest.h>

#include "bankpool/engine.hpp"
#include "bankpool/presets.hpp"

using namespace bankpool;

namespace {

class Seeds : public ::testing::TestWithParam<std::uint64_t> {};

INSTANTIATE_TEST_SUITE_P(Property, Seeds, ::testing::Range<std::uint64_t>(1, 13));

// Random mid-run state: a short baseline run with the seed's own shocks.
SimulationState warmed_up(std::uint64_t seed, ScenarioConfig& c, int periods = 6) {
    c = preset_config(seed % 2 ? "baseline_distressed" : "baseline_perfect");
    c.seed = seed;
    c.banks = 3 + static_cast<int>(seed % 5);
    c.customers = 40 + static_cast<int>(seed * 7 % 60);
    c.periods = periods + 1;
    auto s = initial_state(c);
    for (int t = 0; t < periods; ++t) run_period(s, c);
    return s;
}

double total(const std::vector<BankBalanceSheet>& banks, double BankBalanceSheet::*item) {
    double s = 0.0;
    for (const auto& b : banks) s += b.*item;
    return s;
}

}  // namespace

TEST_P(Seeds, CashPaymentsConserveBaseMoney) {
    ScenarioConfig c;
    auto s = warmed_up(GetParam(), c);
    const double before = total(s.banks, &BankBalanceSheet::a1);
    RngStream rng(GetParam(), StreamLabel::cash_matrix, 99);
    PaymentFlows f;
    f.xi1 = 0.37;
    f.cash = random_row_stochastic(s.book.customer_count(), rng);
    settle_cash_payments(s.banks, s.book, f);
    EXPECT_NEAR(total(s.banks, &BankBalanceSheet::a1), before, 1e-9 * before);
    EXPECT_TRUE(check_identities(s.banks, s.book).ok);
}

TEST_P(Seeds, WiresRedistributeLoanDepositsOnly) {
    ScenarioConfig c;
    auto s = warmed_up(GetParam(), c);
    const double l2 = total(s.banks, &BankBalanceSheet::l2);
    const double a1 = total(s.banks, &BankBalanceSheet::a1);
    const double a3_before = total(s.banks, &BankBalanceSheet::a3);
    RngStream rng(GetParam(), StreamLabel::wire_matrix, 99);
    PaymentFlows f;
    f.xi2 = 0.9;
    f.wire = wire_matrix_for(s.book, rng);
    const auto w = settle_wire_transfers(s.banks, s.book, s.ledger, f, c.reserve_base, 99);
    EXPECT_NEAR(total(s.banks, &BankBalanceSheet::l2), l2, 1e-9 * l2);
    EXPECT_EQ(total(s.banks, &BankBalanceSheet::a1), a1);
    EXPECT_NEAR(total(s.banks, &BankBalanceSheet::a3) - a3_before, w.volume, 1e-9 * std::max(1.0, w.volume));
    EXPECT_NEAR(total(s.banks, &BankBalanceSheet::a3), total(s.banks, &BankBalanceSheet::l3), 1e-6);
    EXPECT_TRUE(check_identities(s.banks, s.book).ok);
    EXPECT_TRUE(check_ledger(s.banks, s.ledger).ok);
}

TEST_P(Seeds, ZeroScalePaymentsAreTheIdentity) {
    ScenarioConfig c;
    auto s = warmed_up(GetParam(), c);
    const auto banks = s.banks;
    const auto book = s.book;
    const auto ledger = s.ledger;
    PaymentFlows f;  // xi1 = xi2 = 0
    settle_cash_payments(s.banks, s.book, f);
    settle_wire_transfers(s.banks, s.book, s.ledger, f, c.reserve_base, 99);
    EXPECT_EQ(s.banks, banks);
    EXPECT_EQ(s.book, book);
    EXPECT_EQ(s.ledger, ledger);
}

TEST_P(Seeds, LendingOnlyTouchesLoansAndLoanDeposits) {
    ScenarioConfig c;
    auto s = warmed_up(GetParam(), c);
    const auto before = s.banks;
    RngStream rng(GetParam(), StreamLabel::absorption, 99);
    const auto g = realise_lending(s.banks, s.book, LendingPolicy::from(c),
                                   std::vector<double>(s.banks.size(), 0.1), rng);
    for (std::size_t i = 0; i < s.banks.size(); ++i) {
        EXPECT_EQ(s.banks[i].a1, before[i].a1);
        EXPECT_EQ(s.banks[i].a3, before[i].a3);
        EXPECT_EQ(s.banks[i].l1, before[i].l1);
        EXPECT_NEAR(s.banks[i].a2 - before[i].a2, g[i], 1e-12 * s.banks[i].scale());
        EXPECT_NEAR(s.banks[i].l2 - before[i].l2, g[i], 1e-12 * s.banks[i].scale());
    }
}

TEST_P(Seeds, PoolingStateSeparatesSurplusAndShortage) {
    ScenarioConfig c;
    auto s = warmed_up(GetParam(), c);
    RngStream rng(GetParam(), StreamLabel::matching, 99);
    const auto ps = compute_pooling_state(s.banks, std::vector<double>(s.banks.size(), 0.1), c.reserve_base, c.phi,
                                          {}, rng);
    for (std::size_t i = 0; i < s.banks.size(); ++i) {
        EXPECT_EQ(ps.excess[i] * ps.need[i], 0.0);
        EXPECT_GE(ps.excess[i], 0.0);
        EXPECT_GE(ps.need[i], 0.0);
    }
    const auto plan = plan_pooled_credit(ps);
    for (std::size_t l = 0; l < s.banks.size(); ++l) {
        double lent = 0.0;
        for (std::size_t b = 0; b < s.banks.size(); ++b) {
            lent += plan.flows(l, b);
            if (plan.flows(l, b) > 0.0) {
                EXPECT_EQ(ps.actual(l, b), 1.0);
            }
        }
        EXPECT_LE(lent, ps.excess[l] * (1 + 1e-12));
    }
    for (std::size_t b = 0; b < s.banks.size(); ++b) {
        EXPECT_GE(plan.unmet[b], 0.0);
        EXPECT_LE(plan.unmet[b], ps.need[b]);
    }
}

TEST_P(Seeds, ReserveTransfersKeepTheLedgerInSync) {
    ScenarioConfig c;
    auto s = warmed_up(GetParam(), c);
    const std::size_t n = s.banks.size();
    RngStream rng(GetParam(), StreamLabel::matching, 7);
    for (int k = 0; k < 20; ++k) {
        const auto from = static_cast<BankId>(rng.next_u64() % n);
        const auto to = static_cast<BankId>(rng.next_u64() % n);
        const double amount = rng.uniform() * 0.2 * std::max(1.0, s.banks[from].a1 + s.banks[from].a3);
        const double a1 = total(s.banks, &BankBalanceSheet::a1);
        transfer_reserves(s.banks, s.ledger, from, to, amount, reserve_weights(s.banks[from], c.reserve_base),
                          c.reserve_base, 99);
        book_interbank_loan(s.banks, s.ledger, LoanKey{from, to, 99}, from == to ? 0.0 : amount, {1, 0, 0});
        EXPECT_NEAR(total(s.banks, &BankBalanceSheet::a1), a1, 1e-9 * a1);
        ASSERT_TRUE(check_ledger(s.banks, s.ledger).ok);
        for (const auto& b : s.banks) {
            EXPECT_GE(b.a1, 0.0);
            EXPECT_GE(b.a3, -1e-6);
            EXPECT_NEAR(b.a1 + b.a2 + b.a3, b.l1 + b.l2 + b.l3, 1e-9 * std::max(1.0, b.scale()));
        }
    }
}

TEST_P(Seeds, FullRunsHoldEveryInvariant) {
    for (const auto& p : kPresets) {
        auto c = preset_config(p.name);
        c.seed = GetParam();
        c.periods = 12;
        const auto tr = run_scenario(c, CheckMode::per_phase);
        EXPECT_LT(tr.max_identity_residual, 1e-9) << p.name;
        for (const auto& rec : tr.periods) {
            const auto& t = rec.totals.totals;
            EXPECT_NEAR(t.a1, 1e9, 1e-9 * 1e9);
            EXPECT_NEAR(t.a3, t.l3, 1e-9 * std::max(1.0, t.a3));
            EXPECT_NEAR(t.a2, t.l2, 1e-9 * std::max(1.0, t.a2));
            EXPECT_EQ(t.a4, t.l4);
            for (const auto& b : rec.banks) EXPECT_EQ(b.a5, b.l5);
        }
    }
}

TEST_P(Seeds, NoPoolingAndNoWiresMeansNoInterbankBook) {
    auto c = preset_config("baseline_perfect");
    c.seed = GetParam();
    c.phi = 1.0;
    c.xi2 = 0.0;
    c.periods = 20;
    const auto tr = run_scenario(c);
    for (const auto& rec : tr.periods) {
        for (const auto& b : rec.banks) {
            EXPECT_EQ(b.a3, 0.0);
            EXPECT_EQ(b.l3, 0.0);
            EXPECT_DOUBLE_EQ(b.a2, b.l2);
        }
    }
}

TEST_P(Seeds, NarrowFractionalReserveRespectsTheMultiplierBound) {
    auto c = preset_config("fig1_left");
    c.seed = GetParam();
    c.xi2 = 0.0;
    const auto tr = run_scenario(c);
    for (const auto& rec : tr.periods) {
        EXPECT_LE(rec.totals.totals.l1 + rec.totals.totals.l2, 1e10 * (1 + 1e-9));
    }
}

TEST_P(Seeds, BroadBaseWithoutRepaymentNeverShrinks) {
    auto c = preset_config("fig2_mid");
    c.seed = GetParam();
    const auto tr = run_scenario(c);
    double prev = 0.0;
    for (const auto& rec : tr.periods) {
        EXPECT_GE(rec.totals.money(), prev * (1 - 1e-12));
        prev = rec.totals.money();
    }
}

TEST_P(Seeds, SharedShocksAcrossPhi) {
    // pooling quality only enters at the pooling step, so the first period's
    // payments and lending are identical for every phi
    auto a = preset_config("baseline_perfect");
    a.seed = GetParam();
    a.periods = 1;
    auto b = a;
    b.phi = 0.8;
    const auto ta = run_scenario(a);
    const auto tb = run_scenario(b);
    EXPECT_EQ(ta.periods[0].totals.customer_lending, tb.periods[0].totals.customer_lending);
    EXPECT_EQ(ta.periods[0].totals.wire_credit, tb.periods[0].totals.wire_credit);
}
