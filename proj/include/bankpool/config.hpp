#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bankpool/error.hpp"
#include "bankpool/stochastics.hpp"

namespace bankpool {

// Which asset items count toward a bank's reserve base.
enum class ReserveBase { narrow, broad, securitised };

enum class LendingBehaviour { money_multiplication, fractional_reserve };

enum class Matching { exogenous_random, endogenous_partner_search };

struct ScenarioConfig {
    int periods = 50;     // T
    int banks = 10;       // B
    int customers = 1000; // C
    double base_money = 1e9;     // A1_0
    double total_equity = 1e8;   // A4_0

    RateLaws rates;

    double required_reserve_ratio = 0.1;                           // gamma^RR
    TriangularParams target_ratio_noise = TriangularParams::point(0.0);

    LendingBehaviour lending = LendingBehaviour::money_multiplication;
    ReserveBase reserve_base = ReserveBase::broad;

    TriangularParams repayment{0.0, 0.3, 1.0};   // psi
    TriangularParams absorption{0.0, 0.8, 1.0};  // theta

    double omega = 0.5;  // interbank repayment threshold
    double phi = 0.0;    // pooling quality threshold
    Matching matching = Matching::exogenous_random;
    double alpha = 1.0;
    double lambda = 1.0;

    double xi1 = 0.1;
    double xi2 = 0.1;

    std::optional<std::uint64_t> seed;

    bool fixed_payment_matrix = false;
    bool transfer_on_issue = true;
    bool relax_target_base = false;

    std::string preset;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline constexpr std::string_view to_string(ReserveBase r) {
    switch (r) {
        case ReserveBase::narrow: return "narrow";
        case ReserveBase::broad: return "broad";
        case ReserveBase::securitised: return "securitised";
    }
    return "?";
}

inline constexpr std::string_view to_string(LendingBehaviour l) {
    switch (l) {
        case LendingBehaviour::money_multiplication: return "money_multiplication";
        case LendingBehaviour::fractional_reserve: return "fractional_reserve";
    }
    return "?";
}

inline constexpr std::string_view to_string(Matching m) {
    switch (m) {
        case Matching::exogenous_random: return "exogenous";
        case Matching::endogenous_partner_search: return "endogenous";
    }
    return "?";
}

namespace detail {

inline void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

inline bool is_fraction(double v) { return v >= 0.0 && v <= 1.0; }

inline void require_law(const TriangularParams& p, const char* key, bool unit_interval) {
    require(p.valid(), key, "expected lower <= peak <= upper");
    if (unit_interval) {
        require(p.lower >= 0.0 && p.upper <= 1.0, key, "support must lie in [0, 1]");
    }
}

}  // namespace detail

// Throws ConfigError naming the first offending key.
inline void validate(const ScenarioConfig& c) {
    using detail::require;
    require(c.periods >= 0, "T", "must be >= 0");
    require(c.banks >= 2, "B", "must be >= 2");
    require(c.customers >= c.banks, "C", "must be >= B");
    require(c.base_money > 0.0 && std::isfinite(c.base_money), "A1_0", "must be > 0");
    require(c.total_equity > 0.0 && std::isfinite(c.total_equity), "A4_0", "must be > 0");
    require(c.required_reserve_ratio > 0.0 && c.required_reserve_ratio <= 1.0, "gamma_RR",
            "must lie in (0, 1]");
    detail::require_law(c.target_ratio_noise, "gamma_TR_noise", false);
    require(c.target_ratio_noise.lower >= 0.0, "gamma_TR_noise", "must be nonnegative");
    detail::require_law(c.rates.a1, "r_A1", false);
    detail::require_law(c.rates.a2, "r_A2", false);
    detail::require_law(c.rates.l1, "r_L1", false);
    detail::require_law(c.rates.l2, "r_L2", false);
    detail::require_law(c.rates.interbank, "r_L3", false);
    require(std::isfinite(c.rates.guarantee_spread), "r_L5_spread", "must be finite");
    detail::require_law(c.repayment, "psi", true);
    detail::require_law(c.absorption, "theta", true);
    require(detail::is_fraction(c.omega), "omega", "must lie in [0, 1]");
    require(detail::is_fraction(c.phi), "phi", "must lie in [0, 1]");
    require(detail::is_fraction(c.xi1), "xi1", "must lie in [0, 1]");
    require(detail::is_fraction(c.xi2), "xi2", "must lie in [0, 1]");
    if (c.matching == Matching::endogenous_partner_search) {
        require(c.alpha > 0.0, "alpha", "must be > 0 for endogenous matching");
        require(c.lambda > 0.0, "lambda", "must be > 0 for endogenous matching");
    }
    require(c.seed.has_value(), "seed", "a seed is required");
}

// Target reserve ratio for one bank in one period.
inline double draw_target_ratio(const ScenarioConfig& c, RngStream& rng) {
    return c.required_reserve_ratio + sample_triangular(c.target_ratio_noise, rng);
}

}  // namespace bankpool
