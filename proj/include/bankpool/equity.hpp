#pragma once

#include <cstddef>
#include <vector>

#include "bankpool/error.hpp"
#include "bankpool/ledger.hpp"
#include "bankpool/stochastics.hpp"

namespace bankpool {

// Period profit on end-of-period stocks: income on a1, a2, a3 less interest on
// l1, l2, l3 and the guarantee fee on l5.
inline double period_profit(const BankBalanceSheet& b, const BankRates& r) {
    return (r.a1 * b.a1 + r.a2 * b.a2 + r.a3 * b.a3) - (r.l1 * b.l1 + r.l2 * b.l2 + r.l3 * b.l3 + r.l5 * b.l5);
}

// Adds each bank's profit to a4 and l4 and returns the profits. Non-cash:
// reserves do not move, and negative equity is allowed.
inline std::vector<double> accrue_equity(std::vector<BankBalanceSheet>& banks, const RateSet& rates) {
    if (rates.banks.size() != banks.size()) throw InvalidParams("rate set must have one entry per bank");
    std::vector<double> profit(banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i) {
        profit[i] = period_profit(banks[i], rates.banks[i]);
        banks[i].a4 += profit[i];
        banks[i].l4 += profit[i];
    }
    return profit;
}

}  // namespace bankpool
