#pragma once

#include <array>
#include <string>
#include <string_view>

#include "bankpool/config.hpp"
#include "bankpool/error.hpp"

namespace bankpool {

struct PresetInfo {
    std::string_view name;
    std::string_view description;
};

inline constexpr std::array<PresetInfo, 8> kPresets{{
    {"fig1_left", "narrow reserve base, fractional reserve lending, no customer repayment"},
    {"fig1_right", "narrow reserve base, money multiplication lending, no customer repayment"},
    {"fig2_left", "narrow reserve base, fractional reserve, no customer or interbank repayment"},
    {"fig2_mid", "broad reserve base (A1+A3), fractional reserve, no customer or interbank repayment"},
    {"fig2_right", "broad reserve base (A1+A3), money multiplication, no customer or interbank repayment"},
    {"baseline_perfect", "baseline calibration, perfect pooling (phi = 0)"},
    {"baseline_smooth", "baseline calibration, smooth pooling (phi = 0.4)"},
    {"baseline_distressed", "baseline calibration, distressed pooling (phi = 0.8)"},
}};

// Benchmark column: point-mass rates and the (0, 0.5, 1) absorption law.
inline ScenarioConfig benchmark_config() {
    ScenarioConfig c;
    c.rates.a1 = TriangularParams::point(0.01);
    c.rates.a2 = TriangularParams::point(0.03);
    c.rates.l1 = TriangularParams::point(0.01);
    c.rates.l2 = TriangularParams::point(0.01);
    c.rates.interbank = TriangularParams::point(0.015);
    c.rates.guarantee_spread = 0.03;
    c.absorption = {0.0, 0.5, 1.0};
    c.repayment = {0.0, 0.5, 1.0};
    c.omega = 0.5;
    c.phi = 0.0;
    c.xi1 = 0.1;
    c.xi2 = 0.1;
    return c;
}

// Baseline calibration column; ScenarioConfig defaults already hold it.
inline ScenarioConfig baseline_config() { return ScenarioConfig{}; }

inline bool is_preset(std::string_view name) {
    for (const auto& p : kPresets) {
        if (p.name == name) return true;
    }
    return false;
}

// Expands a preset name. The seed is left unset.
inline ScenarioConfig preset_config(std::string_view name) {
    ScenarioConfig c;
    if (name.starts_with("fig")) {
        c = benchmark_config();
        c.repayment = TriangularParams::point(0.0);
        c.phi = 0.0;
        if (name == "fig1_left" || name == "fig1_right") {
            c.omega = 0.5;
            c.reserve_base = ReserveBase::narrow;
            c.lending = name == "fig1_left" ? LendingBehaviour::fractional_reserve
                                            : LendingBehaviour::money_multiplication;
        } else if (name == "fig2_left" || name == "fig2_mid" || name == "fig2_right") {
            c.omega = 1.0;
            c.reserve_base = name == "fig2_left" ? ReserveBase::narrow : ReserveBase::broad;
            c.lending = name == "fig2_right" ? LendingBehaviour::money_multiplication
                                             : LendingBehaviour::fractional_reserve;
        } else {
            throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
        }
    } else if (name == "baseline_perfect" || name == "baseline_smooth" || name == "baseline_distressed") {
        c = baseline_config();
        c.phi = name == "baseline_perfect" ? 0.0 : name == "baseline_smooth" ? 0.4 : 0.8;
    } else {
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
    }
    c.preset = std::string(name);
    return c;
}

}  // namespace bankpool
