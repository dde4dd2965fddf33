#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bankpool/error.hpp"
#include "bankpool/interbank.hpp"
#include "bankpool/ledger.hpp"
#include "bankpool/stochastics.hpp"

namespace bankpool {

// Payment shocks for one period. Row r of each matrix is how payer r splits
// its outgoing payments; the diagonal is a self-payment and nets to nothing.
struct PaymentFlows {
    Matrix cash;  // customers x customers
    Matrix wire;  // banks x banks
    double xi1 = 0.0;
    double xi2 = 0.0;
};

/*
 * Customer cash payments. Customer x pays xi1 * l1_x, split over recipients by
 * row x of the cash matrix. All payments are computed from the start-of-phase
 * deposits; each bank's a1 and l1 move by the net of its customers' flows.
 */
inline void settle_cash_payments(std::vector<BankBalanceSheet>& banks, CustomerBook& book, const PaymentFlows& flows,
                                 double tol = 1e-9) {
    const std::size_t nc = book.customer_count();
    if (flows.xi1 == 0.0 || nc == 0) return;
    if (flows.cash.rows != nc || flows.cash.cols != nc) throw InvalidParams("cash matrix must be C x C");

    std::vector<double> paid(nc);
    for (std::size_t x = 0; x < nc; ++x) paid[x] = flows.xi1 * book.l1[x];

    std::vector<double> received(nc, 0.0);
    for (std::size_t x = 0; x < nc; ++x) {
        const double out = paid[x];
        if (out == 0.0) continue;
        const double* row = flows.cash.data.data() + x * nc;
        for (std::size_t y = 0; y < nc; ++y) received[y] += out * row[y];
    }

    std::vector<double> bank_delta(banks.size(), 0.0);
    for (std::size_t j = 0; j < nc; ++j) {
        const double delta = received[j] - paid[j];
        book.l1[j] += delta;
        if (book.l1[j] < 0.0) book.l1[j] = 0.0;  // rounding only: payments never exceed the deposit
        bank_delta[book.assignment[j]] += delta;
    }
    for (std::size_t i = 0; i < banks.size(); ++i) {
        banks[i].a1 += bank_delta[i];
        banks[i].l1 += bank_delta[i];
    }

    for (std::size_t i = 0; i < banks.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j : book.members[i]) sum += book.l1[j];
        if (std::abs(sum - banks[i].l1) > tol * std::max(1.0, banks[i].scale())) {
            throw ConsistencyError("customer cash deposits diverge from bank l1 after cash payments");
        }
    }
}

// Credits (or debits) a bank's customers with `delta` of loan deposits,
// pro-rata to their balances; equal split when the bank holds none yet.
inline void spread_loan_deposits(CustomerBook& book, BankId bank, double bank_l2_before, double delta) {
    const auto& members = book.members[bank];
    if (members.empty() || delta == 0.0) return;
    if (bank_l2_before > 0.0) {
        const double factor = delta / bank_l2_before;
        for (std::size_t j : members) {
            book.l2[j] += book.l2[j] * factor;
            if (book.l2[j] < 0.0) book.l2[j] = 0.0;
        }
    } else {
        const double share = delta / static_cast<double>(members.size());
        for (std::size_t j : members) book.l2[j] += share;
    }
}

struct WireOutcome {
    std::vector<double> net_inflow;  // per bank, positive = received
    double volume = 0.0;             // interbank credit created
    std::size_t loans = 0;
};

/*
 * Loan-deposit wire transfers. Bank u sends xi2 * L2_u split by row u of the
 * wire matrix; flows between each pair net bilaterally, each bank's l2 moves by
 * its net, and the net is carried as interbank credit: receivers gain a3, payers
 * gain l3. Net payers are paired with net receivers in proportion to the
 * receivers' inflows, so every loan is recorded pairwise and each bank is only
 * a lender or only a borrower for this phase.
 */
inline WireOutcome settle_wire_transfers(std::vector<BankBalanceSheet>& banks, CustomerBook& book,
                                         InterbankLoanLedger& ledger, const PaymentFlows& flows, ReserveBase def,
                                         int period) {
    const std::size_t n = banks.size();
    WireOutcome out;
    out.net_inflow.assign(n, 0.0);
    for (const auto& b : banks) {
        if (b.l2 < 0.0) throw ConsistencyError("negative loan deposits before wire transfers");
    }
    if (flows.xi2 == 0.0) return out;
    if (flows.wire.rows != n || flows.wire.cols != n) throw InvalidParams("wire matrix must be B x B");

    for (std::size_t u = 0; u < n; ++u) {
        const double volume = flows.xi2 * banks[u].l2;
        if (volume == 0.0) continue;
        for (std::size_t v = 0; v < n; ++v) {
            if (v == u) continue;
            const double g = volume * flows.wire(u, v);
            out.net_inflow[u] -= g;
            out.net_inflow[v] += g;
        }
    }

    double inflow_total = 0.0;
    for (double x : out.net_inflow) {
        if (x > 0.0) inflow_total += x;
    }

    std::vector<double> l2_before(n);
    for (std::size_t i = 0; i < n; ++i) l2_before[i] = banks[i].l2;

    for (std::size_t i = 0; i < n; ++i) {
        const double net = out.net_inflow[i];
        if (net == 0.0) continue;
        if (banks[i].l2 + net < -1e-9 * std::max(1.0, banks[i].scale())) {
            throw ConsistencyError("wire netting would drive loan deposits negative");
        }
        banks[i].l2 = std::max(0.0, banks[i].l2 + net);
        spread_loan_deposits(book, i, l2_before[i], net);
    }

    if (!(inflow_total > 0.0)) return out;
    for (std::size_t p = 0; p < n; ++p) {
        if (!(out.net_inflow[p] < 0.0)) continue;
        const double owed = -out.net_inflow[p];
        const ReserveComponents w = reserve_weights(banks[p], def);
        for (std::size_t r = 0; r < n; ++r) {
            if (!(out.net_inflow[r] > 0.0)) continue;
            const double amt = owed * out.net_inflow[r] / inflow_total;
            book_interbank_loan(banks, ledger, LoanKey{r, p, period}, amt, w);
            out.volume += amt;
            ++out.loans;
        }
    }
    return out;
}

// Wire matrix restricted to banks with customers: a bank without customers
// cannot be credited with loan deposits.
inline Matrix wire_matrix_for(const CustomerBook& book, RngStream& rng) {
    const std::size_t n = book.members.size();
    Matrix m = random_row_stochastic(n, rng);
    bool all_active = true;
    for (const auto& mem : book.members) all_active = all_active && !mem.empty();
    if (all_active) return m;
    for (std::size_t u = 0; u < n; ++u) {
        double sum = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (book.members[v].empty()) m(u, v) = 0.0;
            sum += m(u, v);
        }
        for (std::size_t v = 0; v < n; ++v) m(u, v) = sum > 0.0 ? m(u, v) / sum : 0.0;
    }
    return m;
}

}  // namespace bankpool
