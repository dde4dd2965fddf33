#pragma once

#include <cstddef>
#include <vector>

#include "bankpool/error.hpp"
#include "bankpool/ledger.hpp"

namespace bankpool {

// Non-cash guarantee covering a bank's residual reserve need for one period.
// It never enters the reserve base; the fee is charged when equity accrues.
struct GuaranteeRecord {
    BankId bank = 0;
    double amount = 0.0;
};

inline std::vector<GuaranteeRecord> grant_guarantees(std::vector<BankBalanceSheet>& banks,
                                                     const std::vector<double>& unmet) {
    if (unmet.size() != banks.size()) throw InvalidParams("unmet needs must have one entry per bank");
    std::vector<GuaranteeRecord> out;
    for (std::size_t i = 0; i < banks.size(); ++i) {
        if (unmet[i] < 0.0) throw InvalidParams("unmet reserve need must be nonnegative");
        if (!(unmet[i] > 0.0)) continue;
        banks[i].a5 += unmet[i];
        banks[i].l5 += unmet[i];
        out.push_back({i, unmet[i]});
    }
    return out;
}

// Start of period: last period's guarantees lapse.
inline void remove_guarantees(std::vector<BankBalanceSheet>& banks) {
    for (auto& b : banks) {
        const double outstanding = b.l5;
        b.a5 -= outstanding;
        b.l5 -= outstanding;
    }
}

}  // namespace bankpool
