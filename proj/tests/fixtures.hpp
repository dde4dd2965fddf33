#pragma once

#include <vector>

#include "bankpool/ledger.hpp"

namespace bankpool::testing {

// A small system where each listed customer holds the given cash at the given
// bank. Bank a1/l1 match the book.
struct SmallSystem {
    std::vector<BankBalanceSheet> banks;
    CustomerBook book;
};

inline SmallSystem small_system(std::size_t bank_count, const std::vector<BankId>& assignment,
                                const std::vector<double>& cash) {
    SmallSystem s;
    s.banks.resize(bank_count);
    s.book.assignment = assignment;
    s.book.l1 = cash;
    s.book.l2.assign(cash.size(), 0.0);
    s.book.rebuild_members(bank_count);
    for (std::size_t j = 0; j < cash.size(); ++j) {
        s.banks[assignment[j]].a1 += cash[j];
        s.banks[assignment[j]].l1 += cash[j];
    }
    return s;
}

// Gives bank `b` loan deposits (and matching loans) spread evenly over its customers.
inline void add_loans(SmallSystem& s, BankId b, double amount) {
    s.banks[b].a2 += amount;
    s.banks[b].l2 += amount;
    const auto& m = s.book.members[b];
    for (std::size_t j : m) s.book.l2[j] += amount / static_cast<double>(m.size());
}

}  // namespace bankpool::testing
