#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "bankpool/config.hpp"
#include "bankpool/error.hpp"
#include "bankpool/ledger.hpp"
#include "bankpool/stochastics.hpp"

namespace bankpool {

struct LoanKey {
    BankId lender = 0;
    BankId borrower = 0;
    int issue_period = 0;

    friend auto operator<=>(const LoanKey&, const LoanKey&) = default;
};

struct LoanEntry {
    double amount = 0.0;
    // Borrower's reserve weights at issuance; repayment is split by these.
    ReserveComponents weights{1.0, 0.0, 0.0};

    friend bool operator==(const LoanEntry&, const LoanEntry&) = default;
};

// Outstanding interbank loans keyed by (lender, borrower, issue period).
// Entries with the same key merge; their weights combine amount-weighted.
class InterbankLoanLedger {
public:
    using Map = std::map<LoanKey, LoanEntry>;

    void add(const LoanKey& key, double amount, const ReserveComponents& weights) {
        if (!(amount > 0.0)) return;
        auto [it, inserted] = entries_.try_emplace(key, LoanEntry{amount, weights});
        if (inserted) return;
        auto& e = it->second;
        const double total = e.amount + amount;
        for (std::size_t k = 0; k < 3; ++k) {
            e.weights[k] = (e.weights[k] * e.amount + weights[k] * amount) / total;
        }
        e.amount = total;
    }

    // Removes up to `amount` from the entry; returns what was removed.
    double reduce(const LoanKey& key, double amount) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return 0.0;
        auto& e = it->second;
        if (amount >= e.amount * (1.0 - kFullFraction)) {
            const double taken = e.amount;
            entries_.erase(it);
            return taken;
        }
        e.amount -= amount;
        return amount;
    }

    const LoanEntry* find(const LoanKey& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    const Map& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<double> lent_by(std::size_t bank_count) const {
        std::vector<double> out(bank_count, 0.0);
        for (const auto& [k, e] : entries_) out[k.lender] += e.amount;
        return out;
    }

    std::vector<double> borrowed_by(std::size_t bank_count) const {
        std::vector<double> out(bank_count, 0.0);
        for (const auto& [k, e] : entries_) out[k.borrower] += e.amount;
        return out;
    }

    // Keys of all loans held by `lender`, in key order.
    std::vector<LoanKey> keys_of_lender(BankId lender) const {
        std::vector<LoanKey> out;
        for (auto it = entries_.lower_bound(LoanKey{lender, 0, std::numeric_limits<int>::min()});
             it != entries_.end() && it->first.lender == lender; ++it) {
            out.push_back(it->first);
        }
        return out;
    }

    friend bool operator==(const InterbankLoanLedger&, const InterbankLoanLedger&) = default;

    // Fractions this close to one move a whole entry, so no dust entries survive.
    static constexpr double kFullFraction = 1e-12;

private:
    Map entries_;
};

// Records a new loan and books it on both balance sheets.
inline void book_interbank_loan(std::vector<BankBalanceSheet>& banks, InterbankLoanLedger& ledger,
                                const LoanKey& key, double amount, const ReserveComponents& weights) {
    if (!(amount > 0.0)) return;
    banks[key.lender].a3 += amount;
    banks[key.borrower].l3 += amount;
    ledger.add(key, amount, weights);
}

// How one reserve transfer was settled.
struct TransferBreakdown {
    double currency = 0.0;      // a1 moved
    double retail_loans = 0.0;  // a2 moved
    double claims_assigned = 0.0;
    double claims_extinguished = 0.0;
    double rolled_over = 0.0;   // settled by new debt of the payer to the payee
};

/*
 * Moves `amount` of reserve value from bank `from` to bank `to`, split across
 * components by `weights`. Only asset items move; the caller books the
 * matching liability or claim change.
 *
 * Currency and retail-loan legs are capped at what the payer holds, and the
 * shortfall joins the interbank leg. The interbank leg is paid by assigning the
 * payer's loan claims to the payee in ledger key order: first claims on third
 * banks, then claims on the payee itself (which extinguishes that debt). Whatever remains is booked as
 * fresh debt of the payer to the payee at `period`, which is how a negative
 * interbank component is represented while keeping every ledger amount
 * positive.
 */
inline TransferBreakdown transfer_reserves(std::vector<BankBalanceSheet>& banks, InterbankLoanLedger& ledger,
                                           BankId from, BankId to, double amount,
                                           const ReserveComponents& weights, ReserveBase def, int period) {
    TransferBreakdown out;
    if (!(amount > 0.0) || from == to) return out;
    auto& payer = banks[from];
    auto& payee = banks[to];

    const double cash_leg = amount * weights[0];
    const double loan_leg = amount * weights[1];
    double claim_leg = amount * weights[2];

    out.currency = std::clamp(cash_leg, 0.0, std::max(0.0, payer.a1));
    payer.a1 -= out.currency;
    payee.a1 += out.currency;
    claim_leg += cash_leg - out.currency;

    out.retail_loans = std::clamp(loan_leg, 0.0, std::max(0.0, payer.a2));
    payer.a2 -= out.retail_loans;
    payee.a2 += out.retail_loans;
    claim_leg += loan_leg - out.retail_loans;

    if (!(claim_leg > 0.0)) return out;

    // Claims move whole, in ledger key order; only the last one taken is split.
    const auto keys = ledger.keys_of_lender(from);
    for (const auto& key : keys) {
        if (!(claim_leg > 0.0)) break;
        if (key.borrower == to) continue;
        const LoanEntry entry = *ledger.find(key);
        const double moved = ledger.reduce(key, std::min(claim_leg, entry.amount));
        ledger.add(LoanKey{to, key.borrower, key.issue_period}, moved, entry.weights);
        payer.a3 -= moved;
        payee.a3 += moved;
        out.claims_assigned += moved;
        claim_leg -= moved;
    }
    for (const auto& key : keys) {
        if (!(claim_leg > 0.0)) break;
        if (key.borrower != to) continue;
        const double moved = ledger.reduce(key, std::min(claim_leg, ledger.find(key)->amount));
        payer.a3 -= moved;
        payee.l3 -= moved;
        out.claims_extinguished += moved;
        claim_leg -= moved;
    }

    if (claim_leg > 0.0) {
        book_interbank_loan(banks, ledger, LoanKey{to, from, period}, claim_leg, reserve_weights(payer, def));
        out.rolled_over = claim_leg;
    }
    return out;
}

struct LedgerResiduals {
    double max_relative = 0.0;
    bool ok = true;
};

// Ledger sums by lender / borrower against each bank's a3 / l3.
inline LedgerResiduals check_ledger(const std::vector<BankBalanceSheet>& banks, const InterbankLoanLedger& ledger,
                                    double tol = 1e-9) {
    LedgerResiduals r;
    const auto lent = ledger.lent_by(banks.size());
    const auto borrowed = ledger.borrowed_by(banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i) {
        const double s = std::max(1.0, banks[i].scale());
        const double rel = std::max(std::abs(lent[i] - banks[i].a3), std::abs(borrowed[i] - banks[i].l3)) / s;
        r.max_relative = std::max(r.max_relative, rel);
    }
    r.ok = r.max_relative <= tol;
    return r;
}

inline void require_ledger_sync(const std::vector<BankBalanceSheet>& banks, const InterbankLoanLedger& ledger,
                                double tol = 1e-9) {
    const auto r = check_ledger(banks, ledger, tol);
    if (!r.ok) {
        throw ConsistencyError("interbank ledger out of sync with balance sheets (relative residual " +
                               std::to_string(r.max_relative) + ")");
    }
}

// ---------------------------------------------------------------------------
// Repayment

struct RepaymentOutcome {
    double volume = 0.0;
    std::size_t count = 0;
};

// Every outstanding loan gets one U(0,1) draw; loans drawing above `omega`
// are repaid in full by the borrower to the lender.
inline RepaymentOutcome repay_interbank_loans(std::vector<BankBalanceSheet>& banks, InterbankLoanLedger& ledger,
                                              double omega, ReserveBase def, int period, RngStream& rng) {
    require_ledger_sync(banks, ledger);
    std::vector<std::pair<LoanKey, double>> due;
    for (const auto& [key, entry] : ledger.entries()) {
        if (rng.uniform() > omega) due.emplace_back(key, entry.amount);
    }

    RepaymentOutcome out;
    for (const auto& [key, due_amount] : due) {
        const LoanEntry* current = ledger.find(key);
        if (current == nullptr) continue;
        const ReserveComponents weights = current->weights;
        const double repaid = ledger.reduce(key, std::min(current->amount, due_amount));
        banks[key.lender].a3 -= repaid;
        banks[key.borrower].l3 -= repaid;
        transfer_reserves(banks, ledger, key.borrower, key.lender, repaid, weights, def, period);
        out.volume += repaid;
        ++out.count;
    }
    require_ledger_sync(banks, ledger);
    return out;
}

// ---------------------------------------------------------------------------
// Pooling

struct MatchingParams {
    Matching mode = Matching::exogenous_random;
    double alpha = 1.0;
    double lambda = 1.0;
};

struct PoolingState {
    std::vector<double> current_ratio;  // gamma^CR, +inf for a bank without deposits
    std::vector<double> excess;         // ER
    std::vector<double> need;           // RN
    std::vector<double> target;         // TR
    std::vector<double> reserve;        // sum of reserve components
    std::vector<ReserveComponents> weights;
    Matrix potential;  // 1 where row is a surplus bank and column a shortage bank
    Matrix selection;  // match probabilities
    Matrix actual;     // 1 where potential and selection > phi
    double phi = 0.0;
    MatchingParams matching;
};

// Preference score for lender l and borrower b under partner search.
// A lender with zero equity ratio scores +inf and is never selected.
inline double partner_score(const BankBalanceSheet& lender, const BankBalanceSheet& borrower, double alpha) {
    const double lender_liab = lender.total_liabilities();
    double gearing;
    if (lender_liab > 0.0) {
        gearing = std::max(0.0, lender.l4 / lender_liab);
    } else {
        gearing = lender.l4 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    const double borrower_liab = borrower.total_liabilities();
    const double exposure = borrower_liab > 0.0 ? std::max(0.0, borrower.l3 / borrower_liab) : 0.0;

    const double lender_term = gearing == 0.0 ? std::numeric_limits<double>::infinity()
                                              : alpha * std::pow(gearing, -alpha);
    return lender_term + alpha * std::pow(exposure, alpha);
}

inline double selection_probability(double score, double lambda) {
    if (std::isinf(score)) return 0.0;
    return lambda * std::exp(-lambda * score);
}

inline PoolingState compute_pooling_state(const std::vector<BankBalanceSheet>& banks,
                                          const std::vector<double>& target_ratio, ReserveBase def, double phi,
                                          const MatchingParams& matching, RngStream& rng) {
    if (matching.mode == Matching::endogenous_partner_search && !(matching.alpha > 0.0 && matching.lambda > 0.0)) {
        throw InvalidParams("endogenous partner search requires alpha > 0 and lambda > 0");
    }
    const std::size_t n = banks.size();
    PoolingState s;
    s.phi = phi;
    s.matching = matching;
    s.current_ratio.resize(n);
    s.excess.assign(n, 0.0);
    s.need.assign(n, 0.0);
    s.target.resize(n);
    s.reserve.resize(n);
    s.weights.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double d = banks[i].deposits();
        const double r = sum_reserve(banks[i], def);
        s.reserve[i] = r;
        s.weights[i] = reserve_weights(banks[i], def);
        s.target[i] = target_ratio[i] * d;
        if (d > 0.0) {
            s.current_ratio[i] = r / d;
        } else {
            s.current_ratio[i] = std::numeric_limits<double>::infinity();
        }
        if (s.current_ratio[i] > target_ratio[i]) {
            s.excess[i] = d > 0.0 ? (s.current_ratio[i] - target_ratio[i]) * d : r;
        } else if (s.current_ratio[i] < target_ratio[i]) {
            s.need[i] = (target_ratio[i] - s.current_ratio[i]) * d;
        }
    }

    s.potential = Matrix(n, n);
    for (std::size_t l = 0; l < n; ++l) {
        if (!(s.excess[l] > 0.0)) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (s.need[b] > 0.0) s.potential(l, b) = 1.0;
        }
    }

    if (matching.mode == Matching::exogenous_random) {
        s.selection = uniform_matrix(n, n, rng);
    } else {
        s.selection = Matrix(n, n);
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t b = 0; b < n; ++b) {
                if (s.potential(l, b) == 0.0) continue;
                s.selection(l, b) =
                    selection_probability(partner_score(banks[l], banks[b], matching.alpha), matching.lambda);
            }
        }
    }

    s.actual = Matrix(n, n);
    for (std::size_t k = 0; k < n * n; ++k) {
        s.actual.data[k] = (s.potential.data[k] == 1.0 && s.selection.data[k] > phi) ? 1.0 : 0.0;
    }
    return s;
}

struct PoolingOutcome {
    Matrix flows;                // lender x borrower amounts
    std::vector<double> unmet;   // residual reserve need per bank
    double volume = 0.0;
    std::size_t count = 0;
};

// Pure allocation: each borrower splits its need across its actual lenders by
// their excess; oversubscribed lenders scale all their borrowers down pro-rata.
inline PoolingOutcome plan_pooled_credit(const PoolingState& s) {
    const std::size_t n = s.need.size();
    PoolingOutcome out;
    out.flows = Matrix(n, n);
    out.unmet = s.need;

    Matrix request(n, n);
    for (std::size_t b = 0; b < n; ++b) {
        if (!(s.need[b] > 0.0)) continue;
        double lender_excess = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            if (s.actual(l, b) == 1.0) lender_excess += s.excess[l];
        }
        if (!(lender_excess > 0.0)) continue;
        for (std::size_t l = 0; l < n; ++l) {
            if (s.actual(l, b) == 1.0) request(l, b) = s.need[b] * s.excess[l] / lender_excess;
        }
    }
    for (std::size_t l = 0; l < n; ++l) {
        double asked = 0.0;
        for (std::size_t b = 0; b < n; ++b) asked += request(l, b);
        if (!(asked > 0.0)) continue;
        const double scale = std::min(1.0, s.excess[l] / asked);
        for (std::size_t b = 0; b < n; ++b) {
            const double amt = request(l, b) * scale;
            if (amt < 0.0) throw ConsistencyError("negative pooled allocation");
            if (!(amt > 0.0)) continue;
            out.flows(l, b) = amt;
            out.unmet[b] -= amt;
            out.volume += amt;
            ++out.count;
        }
    }
    // allocation rounding must not surface as a central-bank guarantee
    for (std::size_t b = 0; b < n; ++b) {
        if (out.unmet[b] <= 1e-9 * s.need[b]) out.unmet[b] = 0.0;
    }
    return out;
}

/*
 * Applies the planned allocation. With `transfer_on_issue` the lender pays the
 * loan out of its reserve components (lender weights); without it the lender
 * pays in interbank claims only, so no currency or customer loans move and the
 * borrower's reserve base changes only where A3 counts. Claims are then booked
 * and each new loan records the borrower's post-transfer reserve weights.
 */
inline PoolingOutcome allocate_pooled_credit(std::vector<BankBalanceSheet>& banks, InterbankLoanLedger& ledger,
                                             const PoolingState& s, ReserveBase def, bool transfer_on_issue,
                                             int period) {
    PoolingOutcome out = plan_pooled_credit(s);
    const std::size_t n = banks.size();
    constexpr ReserveComponents claims_only{0.0, 0.0, 1.0};
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t b = 0; b < n; ++b) {
            const double amt = out.flows(l, b);
            if (amt > 0.0) {
                transfer_reserves(banks, ledger, l, b, amt, transfer_on_issue ? s.weights[l] : claims_only, def,
                                  period);
            }
        }
    }
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t b = 0; b < n; ++b) {
            const double amt = out.flows(l, b);
            if (amt > 0.0) {
                book_interbank_loan(banks, ledger, LoanKey{l, b, period}, amt, reserve_weights(banks[b], def));
            }
        }
    }
    require_ledger_sync(banks, ledger);
    return out;
}

}  // namespace bankpool
