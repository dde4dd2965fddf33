// bankpool: command-line front end for the interbank pooling simulator.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bankpool/engine.hpp"
#include "bankpool/io.hpp"
#include "bankpool/presets.hpp"

namespace {

using namespace bankpool;

struct ConfigArgs {
    std::string config_file;
    std::string preset;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
};

void add_config_options(CLI::App* cmd, ConfigArgs& a) {
    cmd->add_option("--config", a.config_file, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", a.preset, "named preset (see `presets`)");
    cmd->add_option("--set", a.sets, "override, key=value (repeatable)")->allow_extra_args(false);
    cmd->add_option("--seed", a.seed, "master seed");
}

ScenarioConfig resolve(const ConfigArgs& a) {
    std::vector<Setting> file;
    if (!a.config_file.empty()) file = parse_settings(read_file(a.config_file));
    std::vector<Setting> over;
    if (!a.preset.empty()) over.emplace_back("preset", a.preset);
    for (const auto& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(s, "--set expects key=value");
        over.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (a.seed) over.emplace_back("seed", std::to_string(*a.seed));
    return build_config(file, over);
}

std::vector<double> parse_phis(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(detail::parse_double("phis", item));
    if (out.empty()) throw ConfigError("phis", "expected a comma-separated list");
    return out;
}

void print_run_summary(const SimulationTrace& tr) {
    const auto m = summarise(tr);
    std::printf("seed %llu, %zu periods, max identity residual %.3e\n",
                static_cast<unsigned long long>(tr.seed), tr.periods.size(), tr.max_identity_residual);
    if (!tr.periods.empty()) {
        const auto& a = tr.periods.back().totals;
        std::printf("terminal money %.6e (L1 %.6e, L2 %.6e, L3 %.6e)\n", a.money(), a.totals.l1, a.totals.l2,
                    a.totals.l3);
    }
    std::printf("cumulative customer lending %.6e, interbank issuance %.6e, guarantees %.6e\n",
                m.cumulative_customer_lending, m.cumulative_interbank_lending, m.cumulative_guarantees);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based simulator of interbank credit pooling and money creation"};
    app.require_subcommand(1);

    ConfigArgs run_args;
    std::string run_out = "out";
    std::optional<int> run_figure;
    bool run_timing = false;
    bool run_phase_checks = false;
    auto* run = app.add_subcommand("run", "simulate one scenario and write CSV artifacts");
    add_config_options(run, run_args);
    run->add_option("--out", run_out, "output directory");
    run->add_option("--figure", run_figure, "also write figure_N.csv with the columns behind figure N")
        ->check(CLI::Range(1, 8));
    run->add_flag("--timing", run_timing, "record wall time in the manifest (breaks byte-identical reruns)");
    run->add_flag("--check-phases", run_phase_checks, "audit the state after every phase, not only per period");

    ConfigArgs ens_args;
    std::string ens_out = "ensemble";
    std::size_t ens_seeds = 30;
    auto* ens = app.add_subcommand("ensemble", "run member seeds of one scenario and write summary statistics");
    add_config_options(ens, ens_args);
    ens->add_option("--seeds", ens_seeds, "number of member seeds")->check(CLI::PositiveNumber);
    ens->add_option("--out", ens_out, "output directory");

    ConfigArgs cmp_args;
    std::string cmp_phis = "0,0.4,0.8";
    std::size_t cmp_seeds = 30;
    std::string cmp_out;
    auto* cmp = app.add_subcommand("compare", "phi sweep on shared-shock seeds with an ordering table");
    add_config_options(cmp, cmp_args);
    cmp->add_option("--phis", cmp_phis, "comma-separated phi values, in increasing order");
    cmp->add_option("--seeds", cmp_seeds, "seeds per phi")->check(CLI::PositiveNumber);
    cmp->add_option("--out", cmp_out, "optional directory for compare.csv");

    ConfigArgs val_args;
    auto* val = app.add_subcommand("validate", "run with per-phase invariant checks and report");
    add_config_options(val, val_args);

    auto* presets = app.add_subcommand("presets", "list the named presets");
    auto* keys = app.add_subcommand("keys", "list the config keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*presets) {
            for (const auto& p : kPresets) std::printf("%-20s %s\n", std::string(p.name).c_str(),
                                                       std::string(p.description).c_str());
            return 0;
        }
        if (*keys) {
            for (const auto& [k, help] : config_keys()) {
                std::printf("%-22s %s\n", std::string(k).c_str(), std::string(help).c_str());
            }
            return 0;
        }
        if (*run) {
            const auto c = resolve(run_args);
            const auto t0 = std::chrono::steady_clock::now();
            const auto tr = run_scenario(c, run_phase_checks ? CheckMode::per_phase : CheckMode::per_period);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ArtifactOptions opt;
            opt.figure = run_figure;
            if (run_timing) opt.wall_seconds = secs;
            emit_artifacts(tr, run_out, opt);
            print_run_summary(tr);
            std::printf("artifacts written to %s\n", run_out.c_str());
            return 0;
        }
        if (*ens) {
            const auto c = resolve(ens_args);
            const auto e = run_ensemble(c, ens_seeds);
            emit_ensemble(e, ens_out);
            std::printf("%zu runs written to %s\n", e.runs.size(), ens_out.c_str());
            return 0;
        }
        if (*cmp) {
            const auto c = resolve(cmp_args);
            const auto phis = parse_phis(cmp_phis);
            const auto sweep = compare_phi(c, phis, cmp_seeds);
            std::printf("%-32s", "metric (mean per phi)");
            for (double phi : phis) std::printf(" %14s", ("phi=" + format_number(phi)).c_str());
            std::printf("   seeds ordered per step (of %zu)\n", cmp_seeds);
            for (const auto& row : ordering_table(sweep)) {
                std::printf("%-32s", row.metric.c_str());
                for (double m : row.means) std::printf(" %14.6e", m);
                std::printf("  ");
                for (auto n : row.ordered) std::printf(" %zu", n);
                std::printf("\n");
            }
            if (!cmp_out.empty()) {
                std::filesystem::create_directories(cmp_out);
                std::ofstream(std::filesystem::path(cmp_out) / "compare.csv", std::ios::binary) << compare_csv(sweep);
            }
            return 0;
        }
        if (*val) {
            const auto c = resolve(val_args);
            const auto tr = run_scenario(c, CheckMode::per_phase);
            print_run_summary(tr);
            std::printf("all invariants held after every phase (worst relative residual %.3e)\n",
                        tr.max_identity_residual);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error [%s]: %s\n", e.key().c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
