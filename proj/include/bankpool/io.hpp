#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bankpool/config.hpp"
#include "bankpool/engine.hpp"
#include "bankpool/error.hpp"
#include "bankpool/presets.hpp"

namespace bankpool {

inline constexpr std::string_view kVersion = "1.0.0";

class IoError : public SimError {
public:
    using SimError::SimError;
};

// ---------------------------------------------------------------------------
// Number formatting. Shortest representation that parses back to the same
// double, so every emitted file round-trips exactly.

inline std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw IoError("number formatting failed");
    return std::string(buf, end);
}

inline std::string format_law(const TriangularParams& p) {
    if (p.lower == p.peak && p.peak == p.upper) return format_number(p.peak);
    return format_number(p.lower) + "," + format_number(p.peak) + "," + format_number(p.upper);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
    text = trim(text);
    Int v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

// "x" is a point mass; "lower,peak,upper" a triangular law.
inline TriangularParams parse_law(std::string_view key, std::string_view text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        parts.push_back(parse_double(key, text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (parts.size() == 1) return TriangularParams::point(parts[0]);
    if (parts.size() == 3) return {parts[0], parts[1], parts[2]};
    throw ConfigError(std::string(key), "expected one value or lower,peak,upper");
}

struct KeySpec {
    std::string_view key;
    std::string_view help;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

// clang-format off
inline const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table{
        {"T", "number of periods",
         [](ScenarioConfig& c, std::string_view v) { c.periods = parse_integer<int>("T", v); },
         [](const ScenarioConfig& c) { return std::to_string(c.periods); }},
        {"B", "number of banks",
         [](ScenarioConfig& c, std::string_view v) { c.banks = parse_integer<int>("B", v); },
         [](const ScenarioConfig& c) { return std::to_string(c.banks); }},
        {"C", "number of customers",
         [](ScenarioConfig& c, std::string_view v) { c.customers = parse_integer<int>("C", v); },
         [](const ScenarioConfig& c) { return std::to_string(c.customers); }},
        {"A1_0", "total base money",
         [](ScenarioConfig& c, std::string_view v) { c.base_money = parse_double("A1_0", v); },
         [](const ScenarioConfig& c) { return format_number(c.base_money); }},
        {"A4_0", "total bank capital",
         [](ScenarioConfig& c, std::string_view v) { c.total_equity = parse_double("A4_0", v); },
         [](const ScenarioConfig& c) { return format_number(c.total_equity); }},
        {"r_A1", "currency rate law",
         [](ScenarioConfig& c, std::string_view v) { c.rates.a1 = parse_law("r_A1", v); },
         [](const ScenarioConfig& c) { return format_law(c.rates.a1); }},
        {"r_A2", "customer loan rate law",
         [](ScenarioConfig& c, std::string_view v) { c.rates.a2 = parse_law("r_A2", v); },
         [](const ScenarioConfig& c) { return format_law(c.rates.a2); }},
        {"r_L1", "cash deposit rate law",
         [](ScenarioConfig& c, std::string_view v) { c.rates.l1 = parse_law("r_L1", v); },
         [](const ScenarioConfig& c) { return format_law(c.rates.l1); }},
        {"r_L2", "loan deposit rate law",
         [](ScenarioConfig& c, std::string_view v) { c.rates.l2 = parse_law("r_L2", v); },
         [](const ScenarioConfig& c) { return format_law(c.rates.l2); }},
        {"r_L3", "interbank rate law (shared by A3 and L3)",
         [](ScenarioConfig& c, std::string_view v) { c.rates.interbank = parse_law("r_L3", v); },
         [](const ScenarioConfig& c) { return format_law(c.rates.interbank); }},
        {"r_L5_spread", "guarantee rate over the interbank rate",
         [](ScenarioConfig& c, std::string_view v) { c.rates.guarantee_spread = parse_double("r_L5_spread", v); },
         [](const ScenarioConfig& c) { return format_number(c.rates.guarantee_spread); }},
        {"gamma_RR", "required reserve ratio",
         [](ScenarioConfig& c, std::string_view v) { c.required_reserve_ratio = parse_double("gamma_RR", v); },
         [](const ScenarioConfig& c) { return format_number(c.required_reserve_ratio); }},
        {"gamma_TR_noise", "target ratio premium law over gamma_RR",
         [](ScenarioConfig& c, std::string_view v) { c.target_ratio_noise = parse_law("gamma_TR_noise", v); },
         [](const ScenarioConfig& c) { return format_law(c.target_ratio_noise); }},
        {"lending", "money_multiplication | fractional_reserve",
         [](ScenarioConfig& c, std::string_view v) {
             v = trim(v);
             if (v == "money_multiplication") c.lending = LendingBehaviour::money_multiplication;
             else if (v == "fractional_reserve") c.lending = LendingBehaviour::fractional_reserve;
             else throw ConfigError("lending", "expected money_multiplication or fractional_reserve");
         },
         [](const ScenarioConfig& c) { return std::string(to_string(c.lending)); }},
        {"reserve_base", "narrow | broad | securitised",
         [](ScenarioConfig& c, std::string_view v) {
             v = trim(v);
             if (v == "narrow") c.reserve_base = ReserveBase::narrow;
             else if (v == "broad") c.reserve_base = ReserveBase::broad;
             else if (v == "securitised") c.reserve_base = ReserveBase::securitised;
             else throw ConfigError("reserve_base", "expected narrow, broad or securitised");
         },
         [](const ScenarioConfig& c) { return std::string(to_string(c.reserve_base)); }},
        {"psi", "customer repayment ratio law",
         [](ScenarioConfig& c, std::string_view v) { c.repayment = parse_law("psi", v); },
         [](const ScenarioConfig& c) { return format_law(c.repayment); }},
        {"theta", "loan absorption law",
         [](ScenarioConfig& c, std::string_view v) { c.absorption = parse_law("theta", v); },
         [](const ScenarioConfig& c) { return format_law(c.absorption); }},
        {"omega", "interbank repayment threshold",
         [](ScenarioConfig& c, std::string_view v) { c.omega = parse_double("omega", v); },
         [](const ScenarioConfig& c) { return format_number(c.omega); }},
        {"phi", "pooling quality threshold",
         [](ScenarioConfig& c, std::string_view v) { c.phi = parse_double("phi", v); },
         [](const ScenarioConfig& c) { return format_number(c.phi); }},
        {"matching", "exogenous | endogenous",
         [](ScenarioConfig& c, std::string_view v) {
             v = trim(v);
             if (v == "exogenous") c.matching = Matching::exogenous_random;
             else if (v == "endogenous") c.matching = Matching::endogenous_partner_search;
             else throw ConfigError("matching", "expected exogenous or endogenous");
         },
         [](const ScenarioConfig& c) { return std::string(to_string(c.matching)); }},
        {"alpha", "partner search curvature",
         [](ScenarioConfig& c, std::string_view v) { c.alpha = parse_double("alpha", v); },
         [](const ScenarioConfig& c) { return format_number(c.alpha); }},
        {"lambda", "partner search decay",
         [](ScenarioConfig& c, std::string_view v) { c.lambda = parse_double("lambda", v); },
         [](const ScenarioConfig& c) { return format_number(c.lambda); }},
        {"xi1", "cash payment scale",
         [](ScenarioConfig& c, std::string_view v) { c.xi1 = parse_double("xi1", v); },
         [](const ScenarioConfig& c) { return format_number(c.xi1); }},
        {"xi2", "wire transfer scale",
         [](ScenarioConfig& c, std::string_view v) { c.xi2 = parse_double("xi2", v); },
         [](const ScenarioConfig& c) { return format_number(c.xi2); }},
        {"seed", "master seed (required)",
         [](ScenarioConfig& c, std::string_view v) { c.seed = parse_integer<std::uint64_t>("seed", v); },
         [](const ScenarioConfig& c) { return c.seed ? std::to_string(*c.seed) : std::string(); }},
        {"fixed_payment_matrix", "reuse period-0 payment matrices",
         [](ScenarioConfig& c, std::string_view v) { c.fixed_payment_matrix = parse_bool("fixed_payment_matrix", v); },
         [](const ScenarioConfig& c) { return std::string(c.fixed_payment_matrix ? "true" : "false"); }},
        {"transfer_on_issue", "pooled loans move reserves to the borrower",
         [](ScenarioConfig& c, std::string_view v) { c.transfer_on_issue = parse_bool("transfer_on_issue", v); },
         [](const ScenarioConfig& c) { return std::string(c.transfer_on_issue ? "true" : "false"); }},
        {"relax_target_base", "lending target on L1+L2 only",
         [](ScenarioConfig& c, std::string_view v) { c.relax_target_base = parse_bool("relax_target_base", v); },
         [](const ScenarioConfig& c) { return std::string(c.relax_target_base ? "true" : "false"); }},
    };
    return table;
}
// clang-format on

inline const KeySpec* find_key(std::string_view key) {
    for (const auto& k : key_table()) {
        if (k.key == key) return &k;
    }
    return nullptr;
}

}  // namespace detail

using Setting = std::pair<std::string, std::string>;

// Splits "key = value" lines. Blank lines and '#' comments are skipped.
inline std::vector<Setting> parse_settings(std::string_view text) {
    std::vector<Setting> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), "line " + std::to_string(line_no) + ": expected key = value");
        }
        out.emplace_back(std::string(detail::trim(line.substr(0, eq))), std::string(detail::trim(line.substr(eq + 1))));
    }
    return out;
}

// Applies one key. Unknown keys throw ConfigError naming the key.
inline void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view value) {
    if (key == "preset") {
        c = preset_config(detail::trim(value));
        return;
    }
    const auto* spec = detail::find_key(key);
    if (spec == nullptr) throw ConfigError(std::string(key), "unknown key");
    spec->set(c, value);
}

/*
 * Builds a validated config. A preset (from the file or the overrides) is
 * expanded first; every other key then overrides it, file keys before
 * override keys. Throws ConfigError naming the offending key.
 */
inline ScenarioConfig build_config(const std::vector<Setting>& file, const std::vector<Setting>& overrides = {}) {
    ScenarioConfig c;
    std::string preset;
    for (const auto* group : {&file, &overrides}) {
        for (const auto& [k, v] : *group) {
            if (k == "preset") preset = v;
        }
    }
    if (!preset.empty()) c = preset_config(preset);
    for (const auto* group : {&file, &overrides}) {
        for (const auto& [k, v] : *group) {
            if (k != "preset") apply_setting(c, k, v);
        }
    }
    validate(c);
    return c;
}

inline ScenarioConfig parse_config(std::string_view text, const std::vector<Setting>& overrides = {}) {
    return build_config(parse_settings(text), overrides);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<Setting>& overrides = {}) {
    return parse_config(read_file(path), overrides);
}

// Writes every key in table order. parse_config(emit_config(c)) == c.
inline std::string emit_config(const ScenarioConfig& c) {
    std::string out;
    if (!c.preset.empty()) out += "preset = " + c.preset + "\n";
    for (const auto& k : detail::key_table()) {
        if (k.key == "seed" && !c.seed) continue;
        out += std::string(k.key) + " = " + k.get(c) + "\n";
    }
    return out;
}

inline std::vector<std::pair<std::string_view, std::string_view>> config_keys() {
    std::vector<std::pair<std::string_view, std::string_view>> out;
    out.emplace_back("preset", "named preset expanded before other keys");
    for (const auto& k : detail::key_table()) out.emplace_back(k.key, k.help);
    return out;
}

// ---------------------------------------------------------------------------
// CSV artifacts

namespace detail {

inline void write_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f << body;
    if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace detail

inline const std::vector<std::string>& bank_columns() {
    static const std::vector<std::string> cols{"period", "bank", "A1", "A2", "A3", "A4", "A5",
                                               "L1",     "L2",   "L3", "L4", "L5", "pi"};
    return cols;
}

inline std::string banks_csv(const SimulationTrace& tr) {
    std::string out;
    detail::write_row(out, bank_columns());
    for (const auto& p : tr.periods) {
        for (std::size_t i = 0; i < p.banks.size(); ++i) {
            const auto& b = p.banks[i];
            detail::write_row(out, {std::to_string(p.period), std::to_string(i), format_number(b.a1),
                                    format_number(b.a2), format_number(b.a3), format_number(b.a4),
                                    format_number(b.a5), format_number(b.l1), format_number(b.l2),
                                    format_number(b.l3), format_number(b.l4), format_number(b.l5),
                                    format_number(p.profit[i])});
        }
    }
    return out;
}

inline std::vector<std::string> aggregate_columns() {
    std::vector<std::string> cols{"period"};
    for (const auto& n : series_names()) cols.push_back(n);
    cols.insert(cols.end(), {"interbank_issued", "loans_issued", "loans_repaid", "guarantees", "unmet_need"});
    return cols;
}

inline std::string aggregate_csv(const SimulationTrace& tr) {
    std::string out;
    detail::write_row(out, aggregate_columns());
    for (const auto& p : tr.periods) {
        std::vector<std::string> cells{std::to_string(p.period)};
        for (double v : series_row(p.totals)) cells.push_back(format_number(v));
        cells.push_back(format_number(p.totals.interbank_issued()));
        cells.push_back(std::to_string(p.totals.loans_issued));
        cells.push_back(std::to_string(p.totals.loans_repaid));
        cells.push_back(std::to_string(p.totals.guarantees));
        cells.push_back(format_number(p.totals.unmet_need));
        detail::write_row(out, cells);
    }
    return out;
}

// Terminal per-bank values for the distribution panels.
inline std::string histogram_csv(const SimulationTrace& tr) {
    std::string out;
    detail::write_row(out, {"bank", "A2", "A3", "L3", "L4", "L5", "pi"});
    if (tr.periods.empty()) return out;
    const auto& p = tr.periods.back();
    for (std::size_t i = 0; i < p.banks.size(); ++i) {
        const auto& b = p.banks[i];
        detail::write_row(out, {std::to_string(i), format_number(b.a2), format_number(b.a3), format_number(b.l3),
                                format_number(b.l4), format_number(b.l5), format_number(p.profit[i])});
    }
    return out;
}

// Column subsets backing each figure; cumulative columns are running sums.
inline std::vector<std::string> figure_columns(int figure) {
    switch (figure) {
        case 1:
        case 2:
        case 3: return {"period", "L1", "L2", "L3", "money"};
        case 4: return {"period", "A2", "customer_lending", "cumulative_customer_lending"};
        case 5: return {"period", "A3", "interbank_issued", "cumulative_interbank_lending"};
        case 6: return {"period", "L3", "interbank_issued", "cumulative_interbank_borrowing"};
        case 7: return {"period", "L5", "guarantees"};
        case 8: return {"period", "L4", "profit"};
        default: throw ConfigError("figure", "figure must be between 1 and 8");
    }
}

inline std::string figure_csv(const SimulationTrace& tr, int figure) {
    const auto cols = figure_columns(figure);
    std::string out;
    detail::write_row(out, cols);
    double cum_lending = 0.0;
    double cum_interbank = 0.0;
    for (const auto& p : tr.periods) {
        const auto& a = p.totals;
        cum_lending += a.customer_lending;
        cum_interbank += a.interbank_issued();
        const std::map<std::string, std::string, std::less<>> cell{
            {"period", std::to_string(p.period)},
            {"L1", format_number(a.totals.l1)},
            {"L2", format_number(a.totals.l2)},
            {"L3", format_number(a.totals.l3)},
            {"L4", format_number(a.totals.l4)},
            {"L5", format_number(a.totals.l5)},
            {"A2", format_number(a.totals.a2)},
            {"A3", format_number(a.totals.a3)},
            {"money", format_number(a.money())},
            {"profit", format_number(a.profit)},
            {"customer_lending", format_number(a.customer_lending)},
            {"interbank_issued", format_number(a.interbank_issued())},
            {"guarantees", std::to_string(a.guarantees)},
            {"cumulative_customer_lending", format_number(cum_lending)},
            {"cumulative_interbank_lending", format_number(cum_interbank)},
            {"cumulative_interbank_borrowing", format_number(cum_interbank)},
        };
        std::vector<std::string> row;
        for (const auto& c : cols) row.push_back(cell.at(c));
        detail::write_row(out, row);
    }
    return out;
}

// Manifest: config echo and run facts. Wall time is only written on request
// because it would break byte-identical reruns.
inline std::string manifest_text(const SimulationTrace& tr, std::optional<double> wall_seconds = std::nullopt) {
    std::string out;
    out += "version = " + std::string(kVersion) + "\n";
    out += "seed = " + std::to_string(tr.seed) + "\n";
    out += "periods_run = " + std::to_string(tr.periods.size()) + "\n";
    out += "max_identity_residual = " + format_number(tr.max_identity_residual) + "\n";
    if (wall_seconds) out += "wall_time_s = " + format_number(*wall_seconds) + "\n";
    out += "[config]\n";
    out += emit_config(tr.config);
    return out;
}

struct ArtifactOptions {
    std::optional<int> figure;
    std::optional<double> wall_seconds;
};

inline void emit_artifacts(const SimulationTrace& tr, const std::filesystem::path& dir,
                           const ArtifactOptions& opt = {}) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    detail::write_file(dir / "banks.csv", banks_csv(tr));
    detail::write_file(dir / "aggregate.csv", aggregate_csv(tr));
    detail::write_file(dir / "histogram.csv", histogram_csv(tr));
    detail::write_file(dir / "manifest.txt", manifest_text(tr, opt.wall_seconds));
    if (opt.figure) {
        detail::write_file(dir / ("figure_" + std::to_string(*opt.figure) + ".csv"), figure_csv(tr, *opt.figure));
    }
}

// ---------------------------------------------------------------------------
// Ensemble artifacts

inline const std::vector<std::string>& metric_columns() {
    static const std::vector<std::string> cols{
        "seed", "cumulative_customer_lending", "cumulative_interbank_lending", "cumulative_interbank_borrowing",
        "cumulative_guarantees", "guaranteed_period_share", "first_guarantee_period", "terminal_equity",
        "mean_profit", "peak_money"};
    return cols;
}

inline std::vector<std::string> metric_cells(const RunMetrics& m) {
    return {std::to_string(m.seed),
            format_number(m.cumulative_customer_lending),
            format_number(m.cumulative_interbank_lending),
            format_number(m.cumulative_interbank_borrowing),
            format_number(m.cumulative_guarantees),
            format_number(m.guaranteed_period_share),
            std::to_string(m.first_guarantee_period),
            format_number(m.terminal_equity),
            format_number(m.mean_profit),
            format_number(m.peak_money)};
}

inline std::string runs_csv(const EnsembleSummary& e) {
    std::string out;
    detail::write_row(out, metric_columns());
    for (const auto& m : e.runs) detail::write_row(out, metric_cells(m));
    return out;
}

// One row per period; for each series its mean, 5%, 50% and 95% quantiles.
inline std::string ensemble_csv(const EnsembleSummary& e) {
    std::vector<std::string> header{"period"};
    for (const auto& n : series_names()) {
        for (const char* s : {"_mean", "_q05", "_median", "_q95"}) header.push_back(n + s);
    }
    std::string out;
    detail::write_row(out, header);
    const auto& st = e.stats;
    for (std::size_t t = 0; t < st.mean.rows; ++t) {
        std::vector<std::string> row{std::to_string(t + 1)};
        for (std::size_t k = 0; k < st.mean.cols; ++k) {
            row.push_back(format_number(st.mean(t, k)));
            row.push_back(format_number(st.q05(t, k)));
            row.push_back(format_number(st.median(t, k)));
            row.push_back(format_number(st.q95(t, k)));
        }
        detail::write_row(out, row);
    }
    return out;
}

inline void emit_ensemble(const EnsembleSummary& e, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    detail::write_file(dir / "runs.csv", runs_csv(e));
    detail::write_file(dir / "ensemble.csv", ensemble_csv(e));
    std::string manifest = "version = " + std::string(kVersion) + "\nseeds = " + std::to_string(e.runs.size()) +
                           "\n[config]\n" + emit_config(e.config);
    detail::write_file(dir / "manifest.txt", manifest);
}

// ---------------------------------------------------------------------------
// Scenario comparison

struct OrderingRow {
    std::string metric;
    std::vector<double> means;          // per phi
    std::vector<std::size_t> ordered;   // per adjacent pair: seeds with strictly lower value at higher phi
    std::size_t seeds = 0;
};

using MetricFn = double (*)(const RunMetrics&);

inline const std::vector<std::pair<std::string, MetricFn>>& compared_metrics() {
    static const std::vector<std::pair<std::string, MetricFn>> m{
        {"cumulative_customer_lending", [](const RunMetrics& r) { return r.cumulative_customer_lending; }},
        {"cumulative_interbank_lending", [](const RunMetrics& r) { return r.cumulative_interbank_lending; }},
        {"cumulative_interbank_borrowing", [](const RunMetrics& r) { return r.cumulative_interbank_borrowing; }},
        {"cumulative_guarantees", [](const RunMetrics& r) { return r.cumulative_guarantees; }},
        {"terminal_equity", [](const RunMetrics& r) { return r.terminal_equity; }},
        {"mean_profit", [](const RunMetrics& r) { return r.mean_profit; }},
    };
    return m;
}

// Means per scenario and, for each adjacent pair, how many shared-shock seeds
// have the metric strictly decreasing from the lower to the higher phi.
inline std::vector<OrderingRow> ordering_table(const std::vector<EnsembleSummary>& sweep) {
    std::vector<OrderingRow> rows;
    for (const auto& [name, fn] : compared_metrics()) {
        OrderingRow row;
        row.metric = name;
        for (const auto& e : sweep) {
            double s = 0.0;
            for (const auto& r : e.runs) s += fn(r);
            row.means.push_back(e.runs.empty() ? 0.0 : s / static_cast<double>(e.runs.size()));
        }
        row.seeds = sweep.empty() ? 0 : sweep.front().runs.size();
        for (std::size_t k = 0; k + 1 < sweep.size(); ++k) {
            std::size_t n = 0;
            for (std::size_t i = 0; i < row.seeds; ++i) {
                if (fn(sweep[k].runs[i]) > fn(sweep[k + 1].runs[i])) ++n;
            }
            row.ordered.push_back(n);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string compare_csv(const std::vector<EnsembleSummary>& sweep) {
    std::vector<std::string> header{"phi"};
    for (const auto& c : metric_columns()) header.push_back(c);
    std::string out;
    detail::write_row(out, header);
    for (const auto& e : sweep) {
        for (const auto& m : e.runs) {
            auto cells = metric_cells(m);
            cells.insert(cells.begin(), format_number(e.config.phi));
            detail::write_row(out, cells);
        }
    }
    return out;
}

}  // namespace bankpool
