#include <gtest/gtest.h>

#include "bankpool/equity.hpp"

using namespace bankpool;

namespace {

BankRates benchmark() {
    BankRates r;
    r.a1 = 0.01;
    r.a2 = 0.03;
    r.l1 = 0.01;
    r.l2 = 0.01;
    r.a3 = r.l3 = 0.015;
    r.l5 = 0.045;
    return r;
}

}  // namespace

TEST(Profit, EmptyBalanceSheetEarnsNothing) {
    std::vector<BankBalanceSheet> banks(1);
    banks[0].a4 = banks[0].l4 = 1e7;
    const auto p = accrue_equity(banks, RateSet{{benchmark()}});
    EXPECT_EQ(p[0], 0.0);
    EXPECT_EQ(banks[0].l4, 1e7);
}

TEST(Profit, BenchmarkHandExample) {
    BankBalanceSheet b;
    b.a1 = 100;
    b.a2 = 200;
    b.l1 = 100;
    b.l2 = 200;
    EXPECT_DOUBLE_EQ(period_profit(b, benchmark()), 4.0);
}

TEST(Profit, GuaranteeFeeIsAnExpense) {
    BankBalanceSheet b;
    b.a5 = b.l5 = 1000;
    EXPECT_DOUBLE_EQ(period_profit(b, benchmark()), -45.0);
}

TEST(Profit, AccrualIsNonCashAndMayTurnNegative) {
    std::vector<BankBalanceSheet> banks(1);
    banks[0].a1 = banks[0].l1 = 50;
    banks[0].a4 = banks[0].l4 = 1;
    banks[0].a5 = banks[0].l5 = 100;
    accrue_equity(banks, RateSet{{benchmark()}});
    EXPECT_EQ(banks[0].a1, 50);
    EXPECT_EQ(banks[0].a4, banks[0].l4);
    EXPECT_LT(banks[0].l4, 0.0);
}

TEST(Profit, InterbankInterestIsZeroSum) {
    std::vector<BankBalanceSheet> banks(3);
    banks[0].a3 = 70;
    banks[1].a3 = 30;
    banks[1].l3 = 60;
    banks[2].l3 = 40;
    BankRates only_interbank;
    only_interbank.a3 = only_interbank.l3 = 0.02;
    const auto p = accrue_equity(banks, RateSet{{only_interbank, only_interbank, only_interbank}});
    EXPECT_NEAR(p[0] + p[1] + p[2], 0.0, 1e-12);
}

TEST(Profit, RateSetMustMatchBanks) {
    std::vector<BankBalanceSheet> banks(2);
    EXPECT_THROW(accrue_equity(banks, RateSet{{benchmark()}}), InvalidParams);
}
