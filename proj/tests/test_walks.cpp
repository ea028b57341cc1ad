#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vrrw/experiments.hpp"
#include "vrrw/walks.hpp"

using namespace vrrw;

namespace {

const WeightSpec kLin = WeightSpec::linear(1);

std::shared_ptr<const GridFn> toy_f() {
    auto x = geometric_nodes(1e-3, 1e10, 8);
    return std::make_shared<const GridFn>(sample(x, [](double v) { return 0.5 * v; }));
}

std::vector<WalkKind> all_kinds() {
    return {WalkKind::vrrw(),          WalkKind::reflected(),
            WalkKind::tilde(),         WalkKind::hat(0.05, toy_f()),
            WalkKind::hat_restricted(4, 0.05, toy_f()), WalkKind::breve(0.25),
            WalkKind::box(4)};
}


} // namespace

TEST(Kernel, SymmetricFirstStep) {
    for (const auto& k : {WalkKind::vrrw(), WalkKind::tilde(), WalkKind::reflected()}) {
        Walk w(kLin, k);
        EXPECT_DOUBLE_EQ(w.kernel().left, 0.5) << k.name();
        EXPECT_DOUBLE_EQ(w.kernel().right, 0.5) << k.name();
    }
}

TEST(Kernel, LinearAfterStepRight) {
    Walk w(kLin, WalkKind::vrrw());
    w.apply(+1);
    // At 1: left neighbour 0 has Z = 1, right neighbour 2 has Z = 0.
    EXPECT_NEAR(w.kernel().left, 2.0 / 3.0, 1e-15);
}

TEST(Kernel, ReflectedForcedAtMinusOne) {
    Walk w(kLin, WalkKind::reflected());
    w.apply(-1);
    EXPECT_EQ(w.position(), -1);
    EXPECT_EQ(w.kernel().left, 0.0);
    EXPECT_EQ(w.kernel().right, 1.0);
}

TEST(Kernel, BoxForcedAtBothEnds) {
    Walk w(kLin, WalkKind::box(4));
    EXPECT_EQ(w.kernel().left, 0.0);
    for (int i = 0; i < 4; ++i)
        w.apply(+1);
    EXPECT_EQ(w.position(), 4);
    EXPECT_EQ(w.kernel().right, 0.0);
    EXPECT_THROW(w.apply(+1), std::logic_error);
}

TEST(Kernel, BreveHoldsAtZero) {
    Walk w(kLin, WalkKind::breve(0.25));
    Kernel k = w.kernel();
    EXPECT_DOUBLE_EQ(k.hold, 0.75);
    EXPECT_DOUBLE_EQ(k.right, 0.25);
    EXPECT_EQ(k.left, 0.0);
}

// Property: every kernel is a probability vector that respects the floor
// and ceiling of its kind, along random trajectories.
TEST(Kernel, NormalizedAlongRandomRuns) {
    for (const auto& k : all_kinds()) {
        Walk w(kLin, k);
        RandomField f(99);
        for (int t = 0; t < 20000; ++t) {
            Kernel q = w.kernel();
            ASSERT_GE(q.left, 0.0);
            ASSERT_GE(q.hold, 0.0);
            ASSERT_GE(q.right, 0.0);
            ASSERT_NEAR(q.left + q.hold + q.right, 1.0, 1e-15) << k.name();
            if (w.position() == k.floor()) {
                ASSERT_EQ(q.left, 0.0);
            }
            if (w.position() == k.ceiling()) {
                ASSERT_EQ(q.right, 0.0);
            }
            w.step(f);
        }
    }
}

TEST(Step, ThresholdRule) {
    // Find a seed whose first uniform is below 1/2 and one above.
    for (uint64_t s = 0; s < 50; ++s) {
        RandomField f(s);
        double u = f.uniform(0, 1);
        Walk w(kLin, WalkKind::vrrw());
        int move = w.step(f);
        EXPECT_EQ(w.last_uniform(), u);
        EXPECT_EQ(move, u <= 0.5 ? -1 : +1);
    }
}

TEST(Step, ReplayIsBitIdentical) {
    auto run = [](uint64_t seed) {
        Walk w(WeightSpec::polylog(0.6), WalkKind::vrrw());
        RandomField f(seed);
        std::vector<int64_t> path;
        for (int t = 0; t < 5000; ++t) {
            w.step(f);
            path.push_back(w.position());
        }
        return path;
    };
    EXPECT_EQ(run(17), run(17));
    EXPECT_NE(run(17), run(18));
}

TEST(Step, TwoStepLawMonteCarlo) {
    const int N = 100000;
    int at0 = 0;
    for (int s = 0; s < N; ++s) {
        Walk w(kLin, WalkKind::vrrw());
        RandomField f(static_cast<uint64_t>(s));
        w.step(f);
        w.step(f);
        at0 += w.position() == 0;
    }
    double p = 2.0 / 3.0, se = std::sqrt(p * (1 - p) / N);
    EXPECT_NEAR(static_cast<double>(at0) / N, p, 3 * se);
}

TEST(Simulate, ZeroStepsIncrementsOrigin) {
    LedgerState init;
    init.set_z(0, 3);
    init.set_z(1, 2);
    init.set_n(0, 2);
    init.set_z(-1, 1);
    init.set_n(-1, 1);
    SimResult r = simulate(kLin, WalkKind::vrrw(), init, RandomField(1), 0);
    LedgerState want = init;
    want.set_z(0, 4);
    EXPECT_EQ(r.walk.ledger(), want);
    EXPECT_EQ(r.series.rows.size(), 1u);
}

TEST(Simulate, SeriesInvariants) {
    SimResult r = simulate(kLin, WalkKind::vrrw(), {}, RandomField(5), 200000);
    const auto& rows = r.series.rows;
    ASSERT_GE(rows.size(), 10u);
    for (size_t c = 1; c < rows.size(); ++c)
        for (size_t p = 0; p < rows[c].z.size(); ++p) {
            EXPECT_GE(rows[c].y_plus[p], rows[c - 1].y_plus[p]);
            EXPECT_GE(rows[c].y_minus[p], rows[c - 1].y_minus[p]);
            EXPECT_EQ(rows[c].m[p], rows[c].y_plus[p] - rows[c].y_minus[p]);
            EXPECT_GE(rows[c].z[p], rows[c - 1].z[p]);
        }
    EXPECT_EQ(rows.back().step, 200000);
}

TEST(Simulate, CsvHasHeaderAndRows) {
    SimResult r = simulate(kLin, WalkKind::box(4), {}, RandomField(5), 1000);
    std::string csv = r.series.to_csv();
    EXPECT_EQ(csv.rfind("step,", 0), 0u);
    EXPECT_NE(csv.find(",I,S,K"), std::string::npos);
    size_t lines = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
    EXPECT_EQ(lines, r.series.rows.size() + 1);
}

TEST(Checkpoints, GeometricAndEndsAtHorizon) {
    auto t = checkpoint_times(1000000);
    EXPECT_EQ(t.front(), 0);
    EXPECT_EQ(t.back(), 1000000);
    for (size_t i = 1; i < t.size(); ++i)
        EXPECT_GT(t[i], t[i - 1]);
}

TEST(Enumeration, OneAndTwoSteps) {
    Enumeration one = enumerate_exact(kLin, WalkKind::vrrw(), {}, 1);
    EXPECT_DOUBLE_EQ(one.endpoint.at(-1), 0.5);
    EXPECT_DOUBLE_EQ(one.endpoint.at(1), 0.5);
    Enumeration two = enumerate_exact(kLin, WalkKind::vrrw(), {}, 2);
    EXPECT_NEAR(two.endpoint.at(0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(two.endpoint.at(2), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(two.endpoint.at(-2), 1.0 / 6.0, 1e-15);
    EXPECT_EQ(two.paths.size(), 4u);
}

TEST(Enumeration, MassIsOneForEveryKind) {
    for (const auto& k : all_kinds()) {
        Enumeration e = enumerate_exact(WeightSpec::polylog(0.6), k, {}, 6);
        EXPECT_NEAR(e.total_mass, 1.0, 1e-12) << k.name();
    }
    EXPECT_THROW(enumerate_exact(kLin, WalkKind::vrrw(), {}, 15), std::invalid_argument);
}

TEST(Enumeration, MatchesKernelProducts) {
    // Path probabilities equal the product of kernel entries along the path.
    Enumeration e = enumerate_exact(kLin, WalkKind::tilde(), {}, 5);
    for (const auto& p : e.paths) {
        Walk w(kLin, WalkKind::tilde());
        double prob = 1;
        int64_t prev = 0;
        ASSERT_EQ(p.path.front(), 0);
        for (size_t i = 1; i < p.path.size(); ++i) {
            int64_t x = p.path[i];
            Kernel q = w.kernel();
            int mv = static_cast<int>(x - prev);
            prob *= mv < 0 ? q.left : (mv > 0 ? q.right : q.hold);
            w.apply(mv);
            prev = x;
        }
        EXPECT_NEAR(prob, p.prob, 1e-15);
    }
}

// Property: over a million random steps mixing every kind, the ledger keeps
// sum(Z - z0) = n + 1, N(x, x+1) <= Z(x+1) and Z(x) = N(x-1,x) + N(x,x+1)
// away from the origin (arrivals), plus one at the origin.
TEST(LedgerProperty, MixedKindsMillionSteps) {
    int64_t violations = 0, total = 0;
    std::mt19937_64 rng(8);
    auto kinds = all_kinds();
    uint64_t seed = 0;
    while (total < 1000000) {
        const WalkKind& k = kinds[rng() % kinds.size()];
        Walk w(WeightSpec::polylog(0.6), k);
        RandomField f(++seed);
        int64_t n = 20000;
        for (int64_t t = 0; t < n; ++t)
            w.step(f);
        total += n;
        const auto& l = w.ledger();
        int64_t sum = 0;
        for (int64_t x = w.range_lo() - 1; x <= w.range_hi() + 1; ++x) {
            sum += l.z(x);
            if (l.n(x) > l.z(x + 1))
                ++violations;
        }
        if (sum != n + 1)
            ++violations;
        if (!l.is_state())
            ++violations;
    }
    EXPECT_EQ(violations, 0);
}

TEST(LedgerStateTest, JsonRoundTripAndValidation) {
    LedgerState s;
    s.set_z(-1, 2);
    s.set_z(0, 5);
    s.set_n(-1, 2);
    s.set_z(3, 1);
    EXPECT_EQ(LedgerState::from_json(s.to_json()), s);
    EXPECT_THROW(LedgerState::from_json("{\"z\": {\"0\": -1}}"), std::invalid_argument);
    EXPECT_THROW(LedgerState::from_json("{\"q\": {}}"), std::invalid_argument);
    EXPECT_THROW(LedgerState::from_json("not json"), std::invalid_argument);
}

TEST(LedgerStateTest, StatePredicates) {
    LedgerState s;
    EXPECT_TRUE(s.trivial());
    EXPECT_TRUE(s.is_state());
    EXPECT_TRUE(s.reachable());
    s.set_n(0, 2);
    s.set_z(1, 1);
    EXPECT_FALSE(s.is_state());
}

TEST(Symmetrize, Examples) {
    EXPECT_TRUE(symmetrize_state(LedgerState{}).trivial());
    LedgerState s;
    s.set_n(0, 1);
    s.set_z(1, 1);
    s.set_z(0, 1);
    LedgerState m = symmetrize_state(s);
    EXPECT_EQ(m.n(-1), 1);
    EXPECT_EQ(m.z(-1), 1);
    EXPECT_EQ(m.z(0), 2);
    EXPECT_EQ(m.z(1), 1);
    EXPECT_TRUE(m.symmetric());
}

// Property: symmetrizing random reachable right-excursion states always
// yields a symmetric state.
TEST(Symmetrize, AlwaysSymmetric) {
    for (uint64_t s = 1; s <= 200; ++s) {
        Walk w(kLin, WalkKind::breve(0.3));
        RandomField f(s);
        for (int t = 0; t < 50; ++t)
            w.step(f);
        LedgerState st;
        const auto& l = w.ledger();
        for (int64_t x = 0; x <= w.range_hi(); ++x)
            st.set_n(x, l.n(x));
        for (int64_t x = 1; x <= w.range_hi() + 1; ++x)
            st.set_z(x, st.n(x - 1) + st.n(x));
        st.set_z(0, st.n(0));
        if (st.n(0) == 0)
            continue;
        LedgerState m = symmetrize_state(st);
        EXPECT_TRUE(m.symmetric());
        EXPECT_TRUE(m.is_state());
    }
}

TEST(WalkKindTest, ParseAndValidate) {
    EXPECT_EQ(parse_walk_type("hat-restricted"), WalkType::HatRestricted);
    EXPECT_THROW(parse_walk_type("zigzag"), std::invalid_argument);
    EXPECT_THROW(WalkKind::breve(0.7).validate(), std::invalid_argument);
    EXPECT_THROW(WalkKind::hat(0.05, nullptr).validate(), std::invalid_argument);
    EXPECT_THROW(WalkKind::box(0).validate(), std::invalid_argument);
}

TEST(FinalLedger, JsonCarriesKindAndRange) {
    SimResult r = simulate(kLin, WalkKind::vrrw(), {}, RandomField(2), 100);
    std::string j = final_ledger_json(r.walk);
    EXPECT_NE(j.find("\"kind\": \"vrrw\""), std::string::npos);
    EXPECT_NE(j.find("\"time\": 100"), std::string::npos);
}
