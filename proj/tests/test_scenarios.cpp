#include "gather/scenario.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace gather;

namespace {

Scenario two_on(int n) {
    Scenario s;
    s.graph = std::make_shared<const PortGraph>(oriented_ring(n));
    AgentSpec a, b;
    a.label = 1;
    a.start = 0;
    a.wake = Rational(0);
    b.label = 2;
    b.start = 1;
    b.wake = Rational(0);
    s.agents = {a, b};
    return s;
}

bool has(const std::vector<ValidationIssue>& issues, const std::string& code) {
    for (const auto& i : issues)
        if (i.code == code) return true;
    return false;
}

}  // namespace

TEST(Validate, AcceptsAPlainScenario) {
    const auto issues = validate(two_on(4));
    EXPECT_TRUE(accepted(issues));
    EXPECT_TRUE(issues.empty());
}

TEST(Validate, ReportsEachDefect) {
    Scenario s = two_on(4);
    s.agents[1].label = 1;
    EXPECT_TRUE(has(validate(s), "duplicate-label"));

    s = two_on(4);
    s.agents[1].start = 0;
    EXPECT_TRUE(has(validate(s), "shared-start"));

    s = two_on(4);
    s.agents[0].start = 9;
    EXPECT_TRUE(has(validate(s), "bad-start"));

    s = two_on(4);
    s.agents[0].speed = Rational(0);
    EXPECT_TRUE(has(validate(s), "bad-speed"));

    s = two_on(4);
    s.agents[0].wake.reset();
    s.agents[1].wake.reset();
    EXPECT_TRUE(has(validate(s), "no-wakeup"));

    s = two_on(4);
    s.agents.pop_back();
    EXPECT_TRUE(has(validate(s), "too-few-agents"));

    s = two_on(4);
    CrashSpec c;
    c.kind = FaultModel::Total;
    s.agents[0].crash = c;
    EXPECT_TRUE(has(validate(s), "fault-mismatch"));
    EXPECT_FALSE(accepted(validate(s)));
}

TEST(Validate, TotalFaultsWithOneGoodAgentIsOnlyAWarning) {
    const Scenario s = lower_bound_ring(1, 1, 1, 1);
    const auto issues = validate(s);
    EXPECT_TRUE(has(issues, "impossibility-regime"));
    EXPECT_TRUE(accepted(issues));
    EXPECT_FALSE(has(validate(lower_bound_ring(1, 1, 1, 2)), "impossibility-regime"));
}

TEST(LowerBoundRing, Shapes) {
    const Scenario base = lower_bound_ring(1, 1, 1, 1);
    EXPECT_EQ(base.graph->size(), 4);
    EXPECT_EQ(base.agents.size(), 3u);  // bodies at 0 and 2, good agent at 1
    EXPECT_EQ(scenario_stats(base).good, 1);

    const Scenario big = lower_bound_ring(2, 1, 2, 2);
    EXPECT_EQ(big.graph->size(), 12);
    EXPECT_EQ(scenario_stats(big).good, 2);
    std::set<NodeId> good_starts;
    for (const auto& a : big.agents) {
        if (a.crash) {
            EXPECT_EQ(a.start % 2, 0);
            EXPECT_EQ(a.crash->time, Rational(0));
        } else {
            good_starts.insert(a.start);
        }
    }
    EXPECT_EQ(good_starts, (std::set<NodeId>{1, 7}));
    EXPECT_THROW(lower_bound_ring(1, 1, 1, 3), std::invalid_argument);
}

// Property: generated scenarios honour every knob of the configuration.
TEST(GenRandom, RespectsConfiguration) {
    for (FaultModel f : {FaultModel::Motion, FaultModel::Total}) {
        GenConfig cfg;
        cfg.protocol = f;
        cfg.min_good = f == FaultModel::Total ? 2 : 1;
        for (std::uint64_t seed = 1; seed <= 60; ++seed) {
            const auto g = std::make_shared<const PortGraph>(random_connected(3 + static_cast<int>(seed % 6), seed));
            const Scenario s = gen_random(g, cfg, seed);
            EXPECT_TRUE(accepted(validate(s))) << seed;
            const int k = static_cast<int>(s.agents.size());
            EXPECT_GE(k, cfg.k_min);
            EXPECT_LE(k, std::min(cfg.k_max, g->size()));
            const ScenarioStats st = scenario_stats(s);
            EXPECT_GE(st.good, cfg.min_good);
            for (const auto& a : s.agents) {
                EXPECT_GE(a.label, 1u);
                EXPECT_LE(a.label, cfg.label_max);
                EXPECT_GE(a.speed, cfg.speed_min);
                EXPECT_LE(a.speed, cfg.speed_max);
                EXPECT_EQ(Rational(a.speed * cfg.speed_den).get_den(), 1);
                if (a.crash) {
                    EXPECT_EQ(a.crash->kind, f);
                }
            }
            EXPECT_EQ(write_scenario(gen_random(g, cfg, seed)), write_scenario(s));
        }
    }
}

TEST(GenRandom, CrashShareTracksProbability) {
    GenConfig cfg;
    cfg.min_good = 1;
    int agents = 0, crashing = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const auto g = std::make_shared<const PortGraph>(random_connected(8, seed));
        const Scenario s = gen_random(g, cfg, seed);
        for (const auto& a : s.agents) {
            ++agents;
            crashing += a.crash ? 1 : 0;
        }
    }
    const double share = static_cast<double>(crashing) / agents;
    EXPECT_GT(share, 0.25);
    EXPECT_LT(share, 0.45);
}

TEST(GenRandom, UnsatisfiableConfigurations) {
    const auto g = std::make_shared<const PortGraph>(path_graph(3));
    GenConfig cfg;
    cfg.k_min = 4;
    EXPECT_THROW(gen_random(g, cfg, 1), UnsatisfiableConfig);
    cfg = GenConfig{};
    cfg.k_min = 1;
    EXPECT_THROW(gen_random(g, cfg, 1), UnsatisfiableConfig);
    cfg = GenConfig{};
    cfg.speed_max = make_rational(1, 16);
    EXPECT_THROW(gen_random(g, cfg, 1), UnsatisfiableConfig);
}

TEST(ScenarioText, RoundTrip) {
    GenConfig cfg;
    cfg.reactive_permille = 500;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = std::make_shared<const PortGraph>(random_connected(6, seed));
        const Scenario s = gen_random(g, cfg, seed);
        const std::string text = write_scenario(s);
        EXPECT_EQ(write_scenario(parse_scenario(text)), text);
    }
}

TEST(ScenarioText, ErrorsNameTheLine) {
    try {
        parse_scenario("scenario 1\nprotocol motion\nbogus line\n");
        FAIL() << "expected an error";
    } catch (const std::exception& e) {
        EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
    }
}

TEST(ScenarioStats, SpeedsAndLabels) {
    Scenario s = two_on(5);
    s.agents[0].speed = make_rational(1, 4);
    s.agents[1].speed = Rational(3);
    s.agents[1].label = 300;
    const ScenarioStats st = scenario_stats(s);
    EXPECT_EQ(st.epsilon, make_rational(1, 4));
    EXPECT_EQ(st.kappa, Rational(3));
    EXPECT_EQ(st.r, Rational(12));
    EXPECT_EQ(st.lambda, 9);
    EXPECT_EQ(st.good, 2);
}
