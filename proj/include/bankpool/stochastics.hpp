#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "bankpool/error.hpp"

namespace bankpool {

/*
 * Randomness for the simulator.
 *
 * Every consumer of random numbers owns a labelled stream. A stream is keyed by
 * (master seed, label, period), so the draws one phase makes never shift the
 * draws of another, and scenarios that share a master seed see identical
 * payment and lending shocks whatever their pooling parameters are.
 */

enum class StreamLabel : std::uint64_t {
    assignment = 1,
    cash_matrix,
    wire_matrix,
    repayment_ratio,
    absorption,
    interbank_decision,
    matching,
    rates,
    target_ratio,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class RngStream {
public:
    RngStream(std::uint64_t seed, StreamLabel label, std::uint64_t period = 0)
        : seed_(seed), label_(label), engine_(derive(seed, label, period)) {}

    // Uniform on the open interval (0, 1). Built from the top 53 bits so the
    // sequence is identical on every platform.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return engine_(); }

    std::uint64_t seed() const noexcept { return seed_; }
    StreamLabel label() const noexcept { return label_; }

private:
    static std::uint64_t derive(std::uint64_t seed, StreamLabel label, std::uint64_t period) {
        std::uint64_t h = splitmix64(seed);
        h = splitmix64(h ^ static_cast<std::uint64_t>(label));
        return splitmix64(h ^ (period * 0xD1B54A32D192ED03ULL));
    }

    std::uint64_t seed_;
    StreamLabel label_;
    std::mt19937_64 engine_;
};

struct TriangularParams {
    double lower = 0.0;
    double peak = 0.0;
    double upper = 0.0;

    static TriangularParams point(double v) { return {v, v, v}; }

    bool valid() const {
        return std::isfinite(lower) && std::isfinite(peak) && std::isfinite(upper) &&
               lower <= peak && peak <= upper;
    }
    double mean() const { return (lower + peak + upper) / 3.0; }

    friend bool operator==(const TriangularParams&, const TriangularParams&) = default;
};

// Inverse-CDF transform of one uniform variate.
inline double triangular_quantile(const TriangularParams& p, double u) {
    const double width = p.upper - p.lower;
    if (width <= 0.0) return p.lower;
    const double split = (p.peak - p.lower) / width;
    double x;
    if (u < split) {
        x = p.lower + std::sqrt(u * width * (p.peak - p.lower));
    } else {
        x = p.upper - std::sqrt((1.0 - u) * width * (p.upper - p.peak));
    }
    return std::clamp(x, p.lower, p.upper);
}

inline double sample_triangular(const TriangularParams& p, RngStream& rng) {
    if (!p.valid()) {
        throw InvalidParams("triangular parameters must satisfy lower <= peak <= upper");
    }
    return triangular_quantile(p, rng.uniform());
}

// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline Matrix uniform_matrix(std::size_t n, std::size_t m, RngStream& rng) {
    Matrix out(n, m);
    for (double& v : out.data) v = rng.uniform();
    return out;
}

// n x n nonnegative matrix with unit row sums: n uniforms per row, normalised.
inline Matrix random_row_stochastic(std::size_t n, RngStream& rng) {
    Matrix out = uniform_matrix(n, n, rng);
    for (std::size_t r = 0; r < n; ++r) {
        double* row = out.data.data() + r * n;
        double sum = 0.0;
        for (std::size_t c = 0; c < n; ++c) sum += row[c];
        for (std::size_t c = 0; c < n; ++c) row[c] /= sum;
    }
    return out;
}

// Distribution laws for the per-period interest and fee rates.
struct RateLaws {
    TriangularParams a1{0.005, 0.01, 0.015};
    TriangularParams a2{0.02, 0.03, 0.04};
    TriangularParams l1{0.005, 0.01, 0.015};
    TriangularParams l2{0.005, 0.01, 0.015};
    // One system-wide draw per period, used for both A3 and L3 stocks.
    TriangularParams interbank{0.005, 0.015, 0.025};
    double guarantee_spread = 0.03;

    friend bool operator==(const RateLaws&, const RateLaws&) = default;
};

struct BankRates {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
    double l5 = 0.0;
};

// Rates for one period, one entry per bank.
struct RateSet {
    std::vector<BankRates> banks;
};

inline RateSet draw_period_rates(const RateLaws& laws, std::size_t bank_count, RngStream& rng) {
    RateSet out;
    out.banks.resize(bank_count);
    const double interbank = sample_triangular(laws.interbank, rng);
    for (auto& r : out.banks) {
        r.a1 = sample_triangular(laws.a1, rng);
        r.a2 = sample_triangular(laws.a2, rng);
        r.l1 = sample_triangular(laws.l1, rng);
        r.l2 = sample_triangular(laws.l2, rng);
        r.a3 = interbank;
        r.l3 = interbank;
        r.l5 = interbank + laws.guarantee_spread;
    }
    return out;
}

}  // namespace bankpool
