#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "bankpool/io.hpp"

using namespace bankpool;

namespace {

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("bankpool_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Config, PresetExpandsToBaselineColumn) {
    const auto c = parse_config("preset = baseline_perfect\nseed = 1\n");
    EXPECT_EQ(c.phi, 0.0);
    EXPECT_EQ(c.omega, 0.5);
    EXPECT_EQ(c.required_reserve_ratio, 0.1);
    EXPECT_EQ(c.periods, 50);
    EXPECT_EQ(c.banks, 10);
    EXPECT_EQ(c.customers, 1000);
    EXPECT_EQ(c.base_money, 1e9);
    EXPECT_EQ(c.total_equity, 1e8);
    EXPECT_EQ(c.absorption, (TriangularParams{0.0, 0.8, 1.0}));
    EXPECT_EQ(c.repayment, (TriangularParams{0.0, 0.3, 1.0}));
}

TEST(Config, ExplicitKeysOverrideThePreset) {
    const auto c = parse_config("phi = 0.4\npreset = baseline_perfect\nseed = 1\n");
    auto smooth = preset_config("baseline_smooth");
    smooth.seed = 1;
    smooth.preset = "baseline_perfect";
    EXPECT_EQ(c, smooth);
}

TEST(Config, OverridesBeatFileKeys) {
    const auto c = parse_config("preset = fig1_left\nseed = 1\nomega = 0.2\n", {{"omega", "0.7"}});
    EXPECT_EQ(c.omega, 0.7);
}

TEST(Config, ZeroRequiredRatioIsRejected) {
    try {
        parse_config("seed = 1\ngamma_RR = 0\n");
        FAIL() << "accepted gamma_RR = 0";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "gamma_RR");
    }
}

TEST(Config, UnknownKeyIsNamed) {
    try {
        parse_config("seed = 1\nbogus = 3\n");
        FAIL() << "accepted unknown key";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "bogus");
    }
}

TEST(Config, SeedIsMandatory) {
    try {
        parse_config("preset = baseline_perfect\n");
        FAIL() << "accepted a config without seed";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "seed");
    }
}

TEST(Config, OutOfRangeValues) {
    EXPECT_THROW(parse_config("seed = 1\nphi = 1.5\n"), ConfigError);
    EXPECT_THROW(parse_config("seed = 1\nomega = -0.1\n"), ConfigError);
    EXPECT_THROW(parse_config("seed = 1\ntheta = 0,1.2,1\n"), ConfigError);
    EXPECT_THROW(parse_config("seed = 1\nT = abc\n"), ConfigError);
    EXPECT_THROW(parse_config("seed = 1\nmatching = endogenous\nalpha = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("seed = 1\npreset = nope\n"), ConfigError);
    EXPECT_THROW(parse_config("seed = 1\njust a line\n"), ConfigError);
}

TEST(Config, CommentsAndBlankLines) {
    const auto c = parse_config("# a comment\n\n  seed = 5   # trailing\nxi1 = 0.2\n");
    EXPECT_EQ(*c.seed, 5u);
    EXPECT_EQ(c.xi1, 0.2);
}

TEST(Config, EmitThenParseRoundTrips) {
    for (const auto& p : kPresets) {
        auto c = preset_config(p.name);
        c.seed = 123456789012345ULL;
        EXPECT_EQ(parse_config(emit_config(c)), c) << p.name;
    }
    auto odd = preset_config("baseline_smooth");
    odd.seed = 3;
    odd.phi = 0.1 + 0.2;  // not exactly representable as a short decimal
    odd.rates.a2 = {0.0123456789, 0.02, 1.0 / 3.0};
    odd.matching = Matching::endogenous_partner_search;
    odd.alpha = 0.7;
    odd.fixed_payment_matrix = true;
    odd.reserve_base = ReserveBase::securitised;
    EXPECT_EQ(parse_config(emit_config(odd)), odd);
}

TEST(Csv, EmptyTraceGivesHeaderOnlyFiles) {
    auto c = preset_config("baseline_perfect");
    c.seed = 1;
    c.periods = 0;
    const auto tr = run_scenario(c);
    EXPECT_EQ(lines(banks_csv(tr)), 1u);
    EXPECT_EQ(lines(aggregate_csv(tr)), 1u);
    EXPECT_EQ(lines(histogram_csv(tr)), 1u);
    EXPECT_EQ(banks_csv(tr), "period,bank,A1,A2,A3,A4,A5,L1,L2,L3,L4,L5,pi\n");
}

TEST(Csv, BaselineRowCounts) {
    auto c = preset_config("baseline_perfect");
    c.seed = 2;
    const auto tr = run_scenario(c);
    EXPECT_EQ(lines(aggregate_csv(tr)), 51u);
    EXPECT_EQ(lines(banks_csv(tr)), 501u);
    EXPECT_EQ(lines(histogram_csv(tr)), 11u);
    for (int f = 1; f <= 8; ++f) EXPECT_EQ(lines(figure_csv(tr, f)), 51u);
    EXPECT_THROW(figure_csv(tr, 9), ConfigError);
}

TEST(Csv, NumbersRoundTripExactly) {
    for (double v : {0.1, 1.0 / 3.0, 1e9, -2.5e-7, 123456789.123456789}) {
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
}

TEST(Csv, ArtifactsAreByteIdenticalAcrossRuns) {
    auto c = preset_config("baseline_distressed");
    c.seed = 77;
    const auto a = scratch("a");
    const auto b = scratch("b");
    emit_artifacts(run_scenario(c), a, {3, std::nullopt});
    emit_artifacts(run_scenario(c), b, {3, std::nullopt});
    for (const char* f : {"banks.csv", "aggregate.csv", "histogram.csv", "manifest.txt", "figure_3.csv"}) {
        const auto x = read_file(a / f);
        EXPECT_FALSE(x.empty()) << f;
        EXPECT_EQ(x, read_file(b / f)) << f;
    }
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(Csv, ManifestEchoesAReloadableConfig) {
    auto c = preset_config("fig2_mid");
    c.seed = 7;
    c.periods = 3;
    const auto text = manifest_text(run_scenario(c));
    const auto at = text.find("[config]\n");
    ASSERT_NE(at, std::string::npos);
    EXPECT_EQ(parse_config(text.substr(at + 9)), c);
    EXPECT_EQ(text.find("wall_time_s"), std::string::npos);
}

TEST(Compare, OrderingTableCountsSeeds) {
    auto c = preset_config("baseline_perfect");
    c.seed = 1;
    c.periods = 8;
    const auto sweep = compare_phi(c, {0.0, 1.0}, 4);
    const auto rows = ordering_table(sweep);
    ASSERT_EQ(rows.size(), compared_metrics().size());
    for (const auto& r : rows) {
        ASSERT_EQ(r.ordered.size(), 1u);
        EXPECT_LE(r.ordered[0], 4u);
        EXPECT_EQ(r.seeds, 4u);
    }
    EXPECT_EQ(lines(compare_csv(sweep)), 9u);
}
