#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bankpool/config.hpp"
#include "bankpool/error.hpp"
#include "bankpool/stochastics.hpp"

namespace bankpool {

using BankId = std::size_t;

/*
 * Balance sheet of one bank.
 *
 *   assets                      liabilities
 *   a1 currency reserves        l1 currency deposits
 *   a2 retail loans             l2 loan deposits
 *   a3 interbank lending        l3 interbank borrowing
 *   a4 equity reserve           l4 equity provision + cumulated P/L
 *   a5 central-bank assistance  l5 central-bank guarantee
 *
 * Identities: a1 + a2 + a3 == l1 + l2 + l3, a4 == l4, a5 == l5.
 */
struct BankBalanceSheet {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;
    double a5 = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
    double l4 = 0.0;
    double l5 = 0.0;

    double deposits() const { return l1 + l2 + l3; }
    double total_liabilities() const { return l1 + l2 + l3 + l5; }

    // Largest absolute item; the scale used by relative identity checks.
    double scale() const {
        return std::max({std::abs(a1), std::abs(a2), std::abs(a3), std::abs(a4), std::abs(a5),
                         std::abs(l1), std::abs(l2), std::abs(l3), std::abs(l4), std::abs(l5)});
    }

    friend bool operator==(const BankBalanceSheet&, const BankBalanceSheet&) = default;
};

// Reserve components in (A1, A2, A3) order.
using ReserveComponents = std::array<double, 3>;

inline constexpr std::array<bool, 3> included_components(ReserveBase def) {
    switch (def) {
        case ReserveBase::narrow: return {true, false, false};
        case ReserveBase::broad: return {true, false, true};
        case ReserveBase::securitised: return {true, true, true};
    }
    return {true, false, false};
}

inline ReserveComponents reserve_components(const BankBalanceSheet& b, ReserveBase def) {
    const auto inc = included_components(def);
    return {inc[0] ? b.a1 : 0.0, inc[1] ? b.a2 : 0.0, inc[2] ? b.a3 : 0.0};
}

inline double sum_reserve(const BankBalanceSheet& b, ReserveBase def) {
    const auto c = reserve_components(b, def);
    return c[0] + c[1] + c[2];
}

// Share of each included component in the reserve base. An empty or
// non-positive base settles entirely in currency.
inline ReserveComponents reserve_weights(const BankBalanceSheet& b, ReserveBase def) {
    const auto c = reserve_components(b, def);
    const double total = c[0] + c[1] + c[2];
    if (!(total > 0.0)) return {1.0, 0.0, 0.0};
    return {c[0] / total, c[1] / total, c[2] / total};
}

// Per-customer deposits and the fixed customer -> bank assignment.
struct CustomerBook {
    std::vector<BankId> assignment;
    std::vector<double> l1;
    std::vector<double> l2;
    // Customers of each bank, in ascending customer order.
    std::vector<std::vector<std::size_t>> members;

    std::size_t customer_count() const { return assignment.size(); }

    void rebuild_members(std::size_t bank_count) {
        members.assign(bank_count, {});
        for (std::size_t j = 0; j < assignment.size(); ++j) members[assignment[j]].push_back(j);
    }

    friend bool operator==(const CustomerBook&, const CustomerBook&) = default;
};

struct InitialState {
    std::vector<BankBalanceSheet> banks;
    CustomerBook book;
};

inline void validate_initial(const ScenarioConfig& c) {
    if (c.banks < 2) throw ConfigError("B", "must be >= 2");
    if (c.customers < c.banks) throw ConfigError("C", "must be >= B");
    if (!(c.base_money > 0.0)) throw ConfigError("A1_0", "must be > 0");
    if (!(c.total_equity > 0.0)) throw ConfigError("A4_0", "must be > 0");
}

// Builds the period-0 state from an explicit customer -> bank assignment.
inline InitialState initialise_with_assignment(const ScenarioConfig& c, std::vector<BankId> assignment) {
    validate_initial(c);
    const auto nb = static_cast<std::size_t>(c.banks);
    const auto nc = static_cast<std::size_t>(c.customers);
    if (assignment.size() != nc) throw ConfigError("C", "assignment size differs from customer count");
    for (BankId b : assignment) {
        if (b >= nb) throw ConfigError("B", "assignment refers to an unknown bank");
    }

    InitialState s;
    s.book.assignment = std::move(assignment);
    s.book.l1.assign(nc, c.base_money / static_cast<double>(nc));
    s.book.l2.assign(nc, 0.0);
    s.book.rebuild_members(nb);

    s.banks.resize(nb);
    const double equity = c.total_equity / static_cast<double>(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        double cash = 0.0;
        for (std::size_t j : s.book.members[i]) cash += s.book.l1[j];
        auto& bank = s.banks[i];
        bank.a1 = bank.l1 = cash;
        bank.a4 = bank.l4 = equity;
    }
    return s;
}

// Each customer's bank is drawn uniformly from the assignment stream.
inline InitialState initialise(const ScenarioConfig& c) {
    validate_initial(c);
    if (!c.seed) throw ConfigError("seed", "a seed is required");
    RngStream rng(*c.seed, StreamLabel::assignment);
    const auto nb = static_cast<std::uint64_t>(c.banks);
    std::vector<BankId> assignment(static_cast<std::size_t>(c.customers));
    for (auto& b : assignment) {
        b = static_cast<BankId>(std::min<double>(std::floor(rng.uniform() * static_cast<double>(nb)),
                                                 static_cast<double>(nb - 1)));
    }
    return initialise_with_assignment(c, std::move(assignment));
}

// Residuals of one bank's identities and its customer-book sums.
struct BankResiduals {
    double balance = 0.0;   // (a1 + a2 + a3) - (l1 + l2 + l3)
    double equity = 0.0;    // a4 - l4
    double guarantee = 0.0; // a5 - l5
    double book_l1 = 0.0;   // sum of customer l1 - l1
    double book_l2 = 0.0;   // sum of customer l2 - l2
    double scale = 1.0;
    bool ok = true;
};

struct IdentityReport {
    std::vector<BankResiduals> banks;
    bool ok = true;

    // Largest |residual| / max(1, scale) over all banks and identities.
    double max_relative() const {
        double worst = 0.0;
        for (const auto& r : banks) {
            const double s = std::max(1.0, r.scale);
            for (double v : {r.balance, r.equity, r.guarantee, r.book_l1, r.book_l2}) {
                worst = std::max(worst, std::abs(v) / s);
            }
        }
        return worst;
    }

    std::string describe() const {
        std::string out;
        for (std::size_t i = 0; i < banks.size(); ++i) {
            const auto& r = banks[i];
            if (r.ok) continue;
            out += "bank " + std::to_string(i) + ": balance=" + std::to_string(r.balance) +
                   " equity=" + std::to_string(r.equity) + " guarantee=" + std::to_string(r.guarantee) +
                   " book_l1=" + std::to_string(r.book_l1) + " book_l2=" + std::to_string(r.book_l2) + "\n";
        }
        return out;
    }
};

inline IdentityReport check_identities(const std::vector<BankBalanceSheet>& banks, const CustomerBook& book,
                                       double tol = 1e-9) {
    IdentityReport rep;
    rep.banks.resize(banks.size());
    std::vector<double> sum_l1(banks.size(), 0.0);
    std::vector<double> sum_l2(banks.size(), 0.0);
    for (std::size_t j = 0; j < book.assignment.size(); ++j) {
        sum_l1[book.assignment[j]] += book.l1[j];
        sum_l2[book.assignment[j]] += book.l2[j];
    }
    for (std::size_t i = 0; i < banks.size(); ++i) {
        const auto& b = banks[i];
        auto& r = rep.banks[i];
        r.balance = (b.a1 + b.a2 + b.a3) - (b.l1 + b.l2 + b.l3);
        r.equity = b.a4 - b.l4;
        r.guarantee = b.a5 - b.l5;
        r.book_l1 = sum_l1[i] - b.l1;
        r.book_l2 = sum_l2[i] - b.l2;
        r.scale = b.scale();
        const double limit = tol * std::max(1.0, r.scale);
        r.ok = std::abs(r.balance) <= limit && std::abs(r.equity) <= limit && std::abs(r.guarantee) <= limit &&
               std::abs(r.book_l1) <= limit && std::abs(r.book_l2) <= limit;
        rep.ok = rep.ok && r.ok;
    }
    return rep;
}

}  // namespace bankpool
