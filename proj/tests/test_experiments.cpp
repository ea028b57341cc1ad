#include <gtest/gtest.h>

#include <cmath>

#include "json.hpp"
#include "vrrw/experiments.hpp"

using namespace vrrw;

namespace {

const WeightSpec kLin = WeightSpec::linear(1);

Walk run(const WeightSpec& spec, const WalkKind& kind, uint64_t seed, int64_t n,
         bool record = false) {
    Walk w(spec, kind, {}, {record});
    RandomField f(seed);
    for (int64_t t = 0; t < n; ++t)
        w.step(f);
    return w;
}

} // namespace

TEST(Localization, NeedsTenThousandSteps) {
    EXPECT_THROW(detect_localization(run(kLin, WalkKind::vrrw(), 1, 9999)),
                 std::invalid_argument);
}

TEST(Localization, PowerTwoOnTwoSites) {
    auto r = detect_localization(run(WeightSpec::power(2), WalkKind::vrrw(), 1, 100000));
    EXPECT_TRUE(r.localized);
    EXPECT_EQ(r.size(), 2);
}

TEST(Localization, LinearTypicalSeedOnFive) {
    std::map<int64_t, int> sizes;
    for (uint64_t s = 1; s <= 30; ++s) {
        auto r = detect_localization(run(kLin, WalkKind::vrrw(), s, 1000000));
        if (r.localized)
            ++sizes[r.size()];
    }
    auto mode = std::max_element(sizes.begin(), sizes.end(),
                                 [](auto& a, auto& b) { return a.second < b.second; });
    ASSERT_NE(mode, sizes.end());
    EXPECT_EQ(mode->first, 5);
}

TEST(Localization, CriticalNotLocalized) {
    for (int64_t n : {10000, 100000, 1000000})
        for (uint64_t s = 1; s <= 3; ++s)
            EXPECT_FALSE(
                detect_localization(run(WeightSpec::critical(), WalkKind::vrrw(), s, n)).localized)
                << "n=" << n << " seed=" << s;
}

// Property: a range reported as stabilized at T is contained in the range
// reported at 2T for the same seed.
TEST(Localization, MonotoneInHorizon) {
    for (uint64_t s = 1; s <= 30; ++s) {
        auto a = detect_localization(run(WeightSpec::power(2), WalkKind::vrrw(), s, 50000));
        auto b = detect_localization(run(WeightSpec::power(2), WalkKind::vrrw(), s, 100000));
        if (!a.localized)
            continue;
        EXPECT_LE(b.lo, a.lo) << s;
        EXPECT_GE(b.hi, a.hi) << s;
    }
}

TEST(Profile, CenterSitesNearQuarter) {
    OperatorContext ctx(kLin);
    auto psi = psi_profile(ctx, 2);
    int checked = 0;
    for (uint64_t s = 1; s <= 20; ++s) {
        SimResult r = simulate(kLin, WalkKind::vrrw(), {}, RandomField(s), 1000000);
        auto loc = detect_localization(r.walk);
        if (!loc.localized || loc.size() != 5)
            continue;
        ++checked;
        ProfileReport p = profile_compare(r.walk, r.series, psi);
        EXPECT_GE(p.rows[0].ratio_plus, 0.8) << s;
        EXPECT_LE(p.rows[0].ratio_plus, 1.25) << s;
        EXPECT_GE(p.rows[0].ratio_minus, 0.8) << s;
        EXPECT_LE(p.rows[0].ratio_minus, 1.25) << s;
        double n = static_cast<double>(p.n);
        EXPECT_LE(r.walk.ledger().z(p.center + 2) / n, 0.05) << s;
        EXPECT_LE(r.walk.ledger().z(p.center - 2) / n, 0.05) << s;
    }
    EXPECT_GT(checked, 0);
}

TEST(Profile, RejectsUnlocalizedRun) {
    OperatorContext ctx(kLin);
    auto psi = psi_profile(ctx, 1);
    SimResult r = simulate(WeightSpec::critical(), WalkKind::vrrw(), {}, RandomField(1), 20000);
    ASSERT_FALSE(detect_localization(r.walk).localized);
    EXPECT_THROW(profile_compare(r.walk, r.series, psi), std::invalid_argument);
}

TEST(Profile, ProbeWindowIndependent) {
    OperatorContext ctx(kLin);
    auto psi = psi_profile(ctx, 2);
    SimOptions narrow, wide;
    wide.probe_lo = -20;
    wide.probe_hi = 20;
    SimResult a = simulate(kLin, WalkKind::vrrw(), {}, RandomField(4), 200000, narrow);
    SimResult b = simulate(kLin, WalkKind::vrrw(), {}, RandomField(4), 200000, wide);
    ASSERT_TRUE(detect_localization(a.walk).localized);
    EXPECT_EQ(profile_compare(a.walk, a.series, psi).to_csv(),
              profile_compare(b.walk, b.series, psi).to_csv());
}

TEST(Identity, ZeroStepsHasZeroResidual) {
    auto r = pathwise_identity_check(kLin, WalkKind::box(4), 1, 0, 1);
    EXPECT_EQ(r.max_residual, 0.0);
}

TEST(Identity, ConstantAlongTrajectories) {
    for (const char* w : {"linear:1", "polylog:0.6", "power:2"})
        for (int x : {0, 1, 2})
            for (uint64_t s = 1; s <= 5; ++s) {
                auto r = pathwise_identity_check(WeightSpec::parse(w), WalkKind::box(4), s,
                                                 100000, x);
                EXPECT_LE(r.max_residual, 1e-8) << w << " x=" << x << " seed=" << s;
            }
}

TEST(Identity, WrongKindOrSiteRejected) {
    EXPECT_THROW(pathwise_identity_check(kLin, WalkKind::vrrw(), 1, 10, 1),
                 std::invalid_argument);
    EXPECT_THROW(pathwise_identity_check(kLin, WalkKind::box(5), 1, 10, 1),
                 std::invalid_argument);
    EXPECT_THROW(pathwise_identity_check(kLin, WalkKind::box(4), 1, 10, 3),
                 std::invalid_argument);
}

TEST(Urn, TooFewReturnsIsAnError) {
    Walk w = run(kLin, WalkKind::vrrw(), 1, 50, true);
    EXPECT_THROW(urn_balance(w), std::runtime_error);
}

TEST(Urn, RatioSymmetricUnderInversion) {
    int above = 0, below = 0;
    for (uint64_t s = 1; s <= 400; ++s) {
        // Runs that settle away from the origin have too few returns; the
        // mirror symmetry applies to them as a whole, so dropping them is fair.
        std::vector<double> v;
        try {
            v = urn_balance(run(kLin, WalkKind::vrrw(), s, 5000, true));
        } catch (const std::runtime_error&) {
            continue;
        }
        if (v.empty())
            continue;
        above += v.back() > 1;
        below += v.back() < 1;
    }
    int n = above + below;
    EXPECT_NEAR(static_cast<double>(above) / n, 0.5, 3 * std::sqrt(0.25 / n));
}

TEST(Urn, LinearCenteredFiveSiteRunsBalanced) {
    int runs = 0, balanced = 0;
    for (uint64_t s = 1; s <= 60; ++s) {
        Walk w = run(kLin, WalkKind::vrrw(), s, 1000000, true);
        auto loc = detect_localization(w);
        if (!loc.localized || loc.size() != 5 || loc.lo != -2)
            continue;
        ++runs;
        double r = urn_balance(w).back();
        balanced += r >= 2.0 / 3.0 && r <= 1.5;
    }
    ASSERT_GT(runs, 0);
    EXPECT_GE(balanced, 0.8 * runs) << balanced << "/" << runs;
}

TEST(Martingale, VarianceDoesNotExplode) {
    std::vector<uint64_t> seeds;
    for (uint64_t s = 1; s <= 200; ++s)
        seeds.push_back(s);
    auto r = martingale_variance_check(kLin, seeds, 1000, 100000);
    EXPECT_TRUE(r.bounded) << "ratio " << r.ratio;
    EXPECT_EQ(r.checkpoints.back(), 100000);
}

TEST(EndpointTv, BreveWithinRadius) {
    std::vector<uint64_t> seeds;
    for (uint64_t s = 1; s <= 20000; ++s)
        seeds.push_back(s);
    TvReport r = endpoint_tv(kLin, WalkKind::breve(0.25), {}, 6, seeds);
    EXPECT_NEAR(r.exact_mass, 1.0, 1e-12);
    EXPECT_TRUE(r.within(4)) << r.tv << " vs " << r.se_radius;
}

TEST(HatSetupTest, LinearPicksLargestEpsilon) {
    HatSetup h = make_hat_setup(kLin);
    EXPECT_EQ(h.epsilon, 1.0 / 32);
    EXPECT_EQ(h.i_plus, 2);
    ASSERT_TRUE(h.f);
    EXPECT_GT((*h.f)(100.0), 0.0);
}

TEST(Campaign, EmptyKindsListed) {
    CampaignConfig c;
    c.weights = {"linear:1"};
    c.seeds = {1};
    c.horizons = {100};
    auto e = c.validate();
    ASSERT_EQ(e.size(), 2u);
    EXPECT_NE(e[0].find("kinds"), std::string::npos);
    EXPECT_NE(e[1].find("horizons"), std::string::npos);
}

TEST(Campaign, ConfigJsonRoundTripAndErrors) {
    CampaignConfig c;
    c.weights = {"polylog:0.6"};
    c.kinds = {"vrrw", "box"};
    c.seeds = {1, 2, 3};
    c.horizons = {20000};
    c.couplings = {{"tilde", "reflected"}};
    std::vector<std::string> errors;
    CampaignConfig d = CampaignConfig::from_json(c.to_json(), errors);
    EXPECT_TRUE(errors.empty());
    EXPECT_EQ(d.to_json(), c.to_json());

    errors.clear();
    CampaignConfig::from_json(R"({"wieghts": [], "L": "six", "seeds": "1..3"})", errors);
    EXPECT_EQ(errors.size(), 2u);
}

TEST(Campaign, ByteIdenticalAcrossRunsAndThreadCounts) {
    CampaignConfig c;
    c.weights = {"linear:1", "power:2"};
    c.kinds = {"vrrw", "box"};
    c.seeds = {1, 2, 3, 4, 5, 6};
    c.horizons = {20000};
    c.couplings = {{"tilde", "reflected"}};
    c.per_run_csv = true;
    CampaignOutput a = run_campaign(c, 1);
    CampaignOutput b = run_campaign(c, 1);
    CampaignOutput d = run_campaign(c, 3);
    EXPECT_EQ(a.report_json, b.report_json);
    EXPECT_EQ(a.report_json, d.report_json);
    EXPECT_EQ(a.files, d.files);
    auto j = nlohmann::json::parse(a.report_json);
    EXPECT_EQ(j["weights"].size(), 2u);
    EXPECT_TRUE(j["weights"][0]["runs"][1].contains("identity_max_residual"));
    // power:2 has bounded W: no index band, reported as such.
    EXPECT_TRUE(j["weights"][1]["index"].is_null());
}

TEST(Campaign, LinearHistogramModeIsFive) {
    CampaignConfig c;
    c.weights = {"linear:1"};
    c.kinds = {"vrrw"};
    for (uint64_t s = 1; s <= 200; ++s)
        c.seeds.push_back(s);
    c.horizons = {1000000};
    c.index_band = false;
    CampaignOutput out = run_campaign(c, default_threads());
    auto j = nlohmann::json::parse(out.report_json);
    EXPECT_EQ(j["weights"][0]["runs"][0]["range_size_mode"], 5);
}
