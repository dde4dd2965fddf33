#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "bankpool/bank_credit.hpp"
#include "bankpool/central_bank.hpp"
#include "bankpool/config.hpp"
#include "bankpool/equity.hpp"
#include "bankpool/error.hpp"
#include "bankpool/interbank.hpp"
#include "bankpool/ledger.hpp"
#include "bankpool/payments.hpp"
#include "bankpool/stochastics.hpp"

namespace bankpool {

struct SimulationState {
    int period = 0;
    std::vector<BankBalanceSheet> banks;
    CustomerBook book;
    InterbankLoanLedger ledger;
};

inline SimulationState initial_state(const ScenarioConfig& c) {
    auto init = initialise(c);
    return {0, std::move(init.banks), std::move(init.book), {}};
}

// When identity checks run.
enum class CheckMode {
    per_period,  // once, after the period completes
    per_phase,   // after every phase
};

// System-wide flows and stocks of one period.
struct PeriodAggregates {
    BankBalanceSheet totals;
    double profit = 0.0;
    double customer_lending = 0.0;
    double customer_repayment = 0.0;
    double wire_credit = 0.0;
    double pooled_credit = 0.0;
    double interbank_repaid = 0.0;
    std::size_t loans_issued = 0;
    std::size_t loans_repaid = 0;
    std::size_t guarantees = 0;
    double unmet_need = 0.0;

    double money() const { return totals.l1 + totals.l2 + totals.l3; }
    double interbank_issued() const { return wire_credit + pooled_credit; }
};

struct PeriodRecord {
    int period = 0;
    std::vector<BankBalanceSheet> banks;
    std::vector<double> profit;
    PeriodAggregates totals;
};

struct SimulationTrace {
    ScenarioConfig config;
    std::uint64_t seed = 0;
    std::vector<BankBalanceSheet> initial;
    std::vector<PeriodRecord> periods;
    double max_identity_residual = 0.0;
};

inline BankBalanceSheet sum_sheets(const std::vector<BankBalanceSheet>& banks) {
    BankBalanceSheet t;
    for (const auto& b : banks) {
        t.a1 += b.a1; t.a2 += b.a2; t.a3 += b.a3; t.a4 += b.a4; t.a5 += b.a5;
        t.l1 += b.l1; t.l2 += b.l2; t.l3 += b.l3; t.l4 += b.l4; t.l5 += b.l5;
    }
    return t;
}

/*
 * Full state audit: per-bank identities and customer-book sums, ledger
 * against a3/l3, base-money conservation, system-wide interbank duality, and
 * sign constraints. Throws ConsistencyError naming the phase. Returns the worst
 * relative residual seen.
 */
inline double audit_state(const SimulationState& s, const ScenarioConfig& c, const char* phase, double tol = 1e-9) {
    const auto where = [&](const std::string& what) {
        return std::string("period ") + std::to_string(s.period) + " after " + phase + ": " + what;
    };
    const auto rep = check_identities(s.banks, s.book, tol);
    if (!rep.ok) throw ConsistencyError(where("identity violation\n" + rep.describe()));
    const auto led = check_ledger(s.banks, s.ledger, tol);
    if (!led.ok) throw ConsistencyError(where("interbank ledger out of sync"));

    const auto t = sum_sheets(s.banks);
    if (std::abs(t.a1 - c.base_money) > tol * c.base_money) throw ConsistencyError(where("base money not conserved"));
    // relative to the whole system: a fully repaid book leaves rounding dust
    // that is tiny against the balance sheet but not against zero
    if (std::abs(t.a3 - t.l3) > tol * std::max(1.0, t.scale())) {
        throw ConsistencyError(where("interbank lending and borrowing differ"));
    }
    for (std::size_t i = 0; i < s.banks.size(); ++i) {
        const auto& b = s.banks[i];
        const double floor = -tol * std::max(1.0, b.scale());
        if (b.a1 < floor || b.a2 < floor || b.a3 < floor || b.l1 < floor || b.l2 < floor || b.l3 < floor ||
            b.a5 < floor || b.l5 < floor) {
            throw ConsistencyError(where("negative balance item at bank " + std::to_string(i)));
        }
    }
    return std::max(rep.max_relative(), led.max_relative);
}

inline std::vector<double> draw_target_ratios(const ScenarioConfig& c, int period) {
    RngStream rng(*c.seed, StreamLabel::target_ratio, static_cast<std::uint64_t>(period));
    std::vector<double> out(static_cast<std::size_t>(c.banks));
    for (double& g : out) g = draw_target_ratio(c, rng);
    return out;
}

inline PaymentFlows draw_payment_flows(const SimulationState& s, const ScenarioConfig& c, int period) {
    const std::uint64_t key = c.fixed_payment_matrix ? 0 : static_cast<std::uint64_t>(period);
    PaymentFlows f;
    f.xi1 = c.xi1;
    f.xi2 = c.xi2;
    if (c.xi1 != 0.0) {
        RngStream rng(*c.seed, StreamLabel::cash_matrix, key);
        f.cash = random_row_stochastic(s.book.customer_count(), rng);
    }
    if (c.xi2 != 0.0) {
        RngStream rng(*c.seed, StreamLabel::wire_matrix, key);
        f.wire = wire_matrix_for(s.book, rng);
    }
    return f;
}

// Advances the state by one period through the ten ordered steps.
inline PeriodRecord run_period(SimulationState& s, const ScenarioConfig& c, CheckMode mode = CheckMode::per_period,
                               double* worst_residual = nullptr) {
    if (!c.seed) throw ConfigError("seed", "a seed is required");
    if (s.period >= c.periods) throw InvalidParams("period index beyond configured horizon");
    const int t = s.period + 1;
    s.period = t;
    const std::uint64_t seed = *c.seed;
    const auto period_key = static_cast<std::uint64_t>(t);
    double worst = 0.0;
    const auto check = [&](const char* phase) {
        if (mode == CheckMode::per_phase) worst = std::max(worst, audit_state(s, c, phase));
    };

    PeriodRecord rec;
    rec.period = t;
    auto& agg = rec.totals;
    const auto target_ratio = draw_target_ratios(c, t);
    const LendingPolicy policy = LendingPolicy::from(c);

    // 1. last period's guarantees lapse
    remove_guarantees(s.banks);
    for (const auto& b : s.banks) {
        if (b.a5 != 0.0 || b.l5 != 0.0) throw ConsistencyError("guarantees outstanding entering the period");
    }
    check("guarantee removal");

    // 2-3. payments
    const PaymentFlows flows = draw_payment_flows(s, c, t);
    settle_cash_payments(s.banks, s.book, flows);
    check("cash payments");
    const auto wire = settle_wire_transfers(s.banks, s.book, s.ledger, flows, c.reserve_base, t);
    agg.wire_credit = wire.volume;
    agg.loans_issued += wire.loans;
    check("wire transfers");

    // 4-5. customer credit
    {
        RngStream rng(seed, StreamLabel::repayment_ratio, period_key);
        for (double r : repay_customer_loans(s.banks, s.book, policy, rng)) agg.customer_repayment += r;
    }
    check("customer repayment");
    {
        RngStream rng(seed, StreamLabel::absorption, period_key);
        for (double g : realise_lending(s.banks, s.book, policy, target_ratio, rng)) agg.customer_lending += g;
    }
    check("customer lending");

    // 6. interbank repayment precedes pooling
    {
        RngStream rng(seed, StreamLabel::interbank_decision, period_key);
        const auto rep = repay_interbank_loans(s.banks, s.ledger, c.omega, c.reserve_base, t, rng);
        agg.interbank_repaid = rep.volume;
        agg.loans_repaid = rep.count;
    }
    check("interbank repayment");

    // 7. pooling
    PoolingOutcome pooled;
    {
        RngStream rng(seed, StreamLabel::matching, period_key);
        const auto state = compute_pooling_state(s.banks, target_ratio, c.reserve_base, c.phi,
                                                 MatchingParams{c.matching, c.alpha, c.lambda}, rng);
        pooled = allocate_pooled_credit(s.banks, s.ledger, state, c.reserve_base, c.transfer_on_issue, t);
        agg.pooled_credit = pooled.volume;
        agg.loans_issued += pooled.count;
    }
    check("pooling");

    // 8. central-bank guarantees for what pooling left unmet
    const auto granted = grant_guarantees(s.banks, pooled.unmet);
    agg.guarantees = granted.size();
    for (double u : pooled.unmet) agg.unmet_need += u;
    check("guarantees");

    // 9. rates and equity
    {
        RngStream rng(seed, StreamLabel::rates, period_key);
        const auto rates = draw_period_rates(c.rates, s.banks.size(), rng);
        rec.profit = accrue_equity(s.banks, rates);
    }
    for (double p : rec.profit) agg.profit += p;

    // 10. snapshot
    worst = std::max(worst, audit_state(s, c, "equity accrual"));
    rec.banks = s.banks;
    agg.totals = sum_sheets(s.banks);
    if (worst_residual) *worst_residual = std::max(*worst_residual, worst);
    return rec;
}

inline SimulationTrace run_scenario(const ScenarioConfig& c, CheckMode mode = CheckMode::per_period) {
    validate(c);
    SimulationTrace trace;
    trace.config = c;
    trace.seed = *c.seed;
    SimulationState s = initial_state(c);
    trace.max_identity_residual = audit_state(s, c, "initialisation");
    trace.initial = s.banks;
    trace.periods.reserve(static_cast<std::size_t>(c.periods));
    for (int t = 0; t < c.periods; ++t) {
        trace.periods.push_back(run_period(s, c, mode, &trace.max_identity_residual));
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Ensembles

// Seed of ensemble member k; member 0 runs on the master seed itself.
inline std::uint64_t member_seed(std::uint64_t master, std::size_t k) {
    if (k == 0) return master;
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(k)));
}

// Per-run scalar outcomes used for scenario comparison.
struct RunMetrics {
    std::uint64_t seed = 0;
    double cumulative_customer_lending = 0.0;
    double cumulative_interbank_lending = 0.0;
    double cumulative_interbank_borrowing = 0.0;
    double cumulative_guarantees = 0.0;
    double guaranteed_period_share = 0.0;
    int first_guarantee_period = -1;  // -1 when never assisted
    double terminal_equity = 0.0;
    double mean_profit = 0.0;          // per bank per period
    double peak_money = 0.0;
};

inline RunMetrics summarise(const SimulationTrace& tr) {
    RunMetrics m;
    m.seed = tr.seed;
    std::size_t assisted = 0;
    double profit = 0.0;
    std::size_t obs = 0;
    for (const auto& p : tr.periods) {
        const auto& a = p.totals;
        m.cumulative_customer_lending += a.customer_lending;
        m.cumulative_interbank_lending += a.interbank_issued();
        // every new claim is someone's new debt, so the two totals coincide
        m.cumulative_interbank_borrowing += a.interbank_issued();
        m.cumulative_guarantees += a.totals.l5;
        if (a.totals.l5 > 0.0) {
            ++assisted;
            if (m.first_guarantee_period < 0) m.first_guarantee_period = p.period;
        }
        for (double x : p.profit) {
            profit += x;
            ++obs;
        }
        m.peak_money = std::max(m.peak_money, a.money());
    }
    if (!tr.periods.empty()) {
        m.guaranteed_period_share = static_cast<double>(assisted) / static_cast<double>(tr.periods.size());
        m.terminal_equity = tr.periods.back().totals.totals.l4;
    } else {
        m.terminal_equity = sum_sheets(tr.initial).l4;
    }
    m.mean_profit = obs ? profit / static_cast<double>(obs) : 0.0;
    return m;
}

// Named per-period aggregate series, in column order.
inline const std::vector<std::string>& series_names() {
    static const std::vector<std::string> names{
        "money", "A1", "A2", "A3", "A4", "A5", "L1", "L2", "L3", "L4", "L5", "profit",
        "customer_lending", "customer_repayment", "wire_credit", "pooled_credit", "interbank_repaid"};
    return names;
}

inline std::vector<double> series_row(const PeriodAggregates& a) {
    const auto& t = a.totals;
    return {a.money(), t.a1, t.a2, t.a3, t.a4, t.a5, t.l1, t.l2, t.l3, t.l4, t.l5, a.profit,
            a.customer_lending, a.customer_repayment, a.wire_credit, a.pooled_credit, a.interbank_repaid};
}

struct SeriesStats {
    Matrix mean;    // periods x series
    Matrix q05;
    Matrix median;
    Matrix q95;
};

struct EnsembleSummary {
    ScenarioConfig config;
    std::vector<RunMetrics> runs;
    std::vector<std::vector<PeriodAggregates>> series;  // per run, per period
    SeriesStats stats;
};

namespace detail {

// Linear-interpolated quantile of a sorted sample.
inline double quantile_sorted(const std::vector<double>& v, double q) {
    if (v.empty()) return 0.0;
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + (v[hi] - v[lo]) * frac;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace detail

inline SeriesStats compute_stats(const std::vector<std::vector<PeriodAggregates>>& series) {
    SeriesStats st;
    if (series.empty()) return st;
    const std::size_t periods = series.front().size();
    const std::size_t cols = series_names().size();
    st.mean = Matrix(periods, cols);
    st.q05 = Matrix(periods, cols);
    st.median = Matrix(periods, cols);
    st.q95 = Matrix(periods, cols);
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < periods; ++t) {
        rows.clear();
        for (const auto& run : series) rows.push_back(series_row(run[t]));
        for (std::size_t k = 0; k < cols; ++k) {
            std::vector<double> sample;
            sample.reserve(rows.size());
            double sum = 0.0;
            for (const auto& r : rows) {
                sample.push_back(r[k]);
                sum += r[k];
            }
            std::sort(sample.begin(), sample.end());
            st.mean(t, k) = sum / static_cast<double>(sample.size());
            st.q05(t, k) = detail::quantile_sorted(sample, 0.05);
            st.median(t, k) = detail::quantile_sorted(sample, 0.5);
            st.q95(t, k) = detail::quantile_sorted(sample, 0.95);
        }
    }
    return st;
}

// Runs n_seeds independent scenarios on member seeds of the master seed.
inline EnsembleSummary run_ensemble(const ScenarioConfig& c, std::size_t n_seeds) {
    validate(c);
    if (n_seeds < 1) throw InvalidParams("an ensemble needs at least one seed");
    EnsembleSummary out;
    out.config = c;
    out.runs.resize(n_seeds);
    out.series.resize(n_seeds);
    detail::parallel_for(n_seeds, [&](std::size_t k) {
        ScenarioConfig member = c;
        member.seed = member_seed(*c.seed, k);
        const auto trace = run_scenario(member);
        out.runs[k] = summarise(trace);
        auto& s = out.series[k];
        for (const auto& p : trace.periods) s.push_back(p.totals);
    });
    out.stats = compute_stats(out.series);
    return out;
}

// One ensemble per phi value. Member k of every ensemble uses the same seed,
// so payment and lending shocks are shared across the sweep.
inline std::vector<EnsembleSummary> compare_phi(const ScenarioConfig& c, const std::vector<double>& phis,
                                                std::size_t n_seeds) {
    std::vector<EnsembleSummary> out;
    for (double phi : phis) {
        ScenarioConfig v = c;
        v.phi = phi;
        out.push_back(run_ensemble(v, n_seeds));
    }
    return out;
}

}  // namespace bankpool
