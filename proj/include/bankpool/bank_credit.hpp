#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "bankpool/config.hpp"
#include "bankpool/ledger.hpp"
#include "bankpool/payments.hpp"
#include "bankpool/stochastics.hpp"

namespace bankpool {

struct LendingPolicy {
    LendingBehaviour behaviour = LendingBehaviour::money_multiplication;
    ReserveBase reserve_base = ReserveBase::broad;
    TriangularParams repayment{0.0, 0.3, 1.0};
    TriangularParams absorption{0.0, 0.8, 1.0};
    // Target on l1 + l2 instead of l1 + l2 + l3.
    bool relax_target_base = false;

    static LendingPolicy from(const ScenarioConfig& c) {
        return {c.lending, c.reserve_base, c.repayment, c.absorption, c.relax_target_base};
    }
};

// Customers repay psi * L2 of their loans, with psi drawn per bank. Loan
// assets and loan deposits fall together; a bank never writes a2 below zero.
inline std::vector<double> repay_customer_loans(std::vector<BankBalanceSheet>& banks, CustomerBook& book,
                                                const LendingPolicy& policy, RngStream& rng) {
    std::vector<double> ratios(banks.size());
    for (double& r : ratios) r = sample_triangular(policy.repayment, rng);

    std::vector<double> repaid(banks.size(), 0.0);
    for (std::size_t i = 0; i < banks.size(); ++i) {
        auto& b = banks[i];
        if (!(b.l2 > 0.0)) continue;
        const double amount = std::min(ratios[i] * b.l2, std::max(0.0, b.a2));
        if (!(amount > 0.0)) continue;
        const double before = b.l2;
        b.a2 -= amount;
        b.l2 -= amount;
        spread_loan_deposits(book, i, before, -amount);
        repaid[i] = amount;
    }
    return repaid;
}

// Potential new customer lending of one bank.
inline double target_lending(const BankBalanceSheet& bank, ReserveBase reserve_base, LendingBehaviour behaviour,
                             double target_ratio, bool relax_target_base = false) {
    const double reserve = sum_reserve(bank, reserve_base);
    const double deposits = relax_target_base ? bank.l1 + bank.l2 : bank.deposits();
    switch (behaviour) {
        case LendingBehaviour::money_multiplication:
            return std::max(0.0, reserve / target_ratio - deposits);
        case LendingBehaviour::fractional_reserve:
            return std::max(0.0, reserve - target_ratio * deposits);
    }
    return 0.0;
}

inline double target_lending(const BankBalanceSheet& bank, const LendingPolicy& policy, double target_ratio) {
    return target_lending(bank, policy.reserve_base, policy.behaviour, target_ratio, policy.relax_target_base);
}

/*
 * Credit realisation. All banks' potentials come from one snapshot; each bank
 * then grants theta * potential (theta drawn per bank), booked as equal a2/l2
 * and split equally across its customers. A bank without customers grants
 * nothing.
 */
inline std::vector<double> realise_lending(std::vector<BankBalanceSheet>& banks, CustomerBook& book,
                                           const LendingPolicy& policy, const std::vector<double>& target_ratio,
                                           RngStream& rng) {
    const std::size_t n = banks.size();
    std::vector<double> potential(n);
    for (std::size_t i = 0; i < n; ++i) {
        potential[i] = book.members[i].empty() ? 0.0 : target_lending(banks[i], policy, target_ratio[i]);
    }
    std::vector<double> granted(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = sample_triangular(policy.absorption, rng);
        const double amount = theta * potential[i];
        if (!(amount > 0.0)) continue;
        banks[i].a2 += amount;
        banks[i].l2 += amount;
        const double share = amount / static_cast<double>(book.members[i].size());
        for (std::size_t j : book.members[i]) book.l2[j] += share;
        granted[i] = amount;
    }
    return granted;
}

}  // namespace bankpool
