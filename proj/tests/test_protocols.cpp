#include "gather/harness.hpp"
#include "gather/protocols.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace gather;

namespace {

AgentSpec agent(Label l, NodeId start, Rational speed, std::optional<Rational> wake = Rational(0)) {
    AgentSpec a;
    a.label = l;
    a.start = start;
    a.speed = std::move(speed);
    a.wake = std::move(wake);
    return a;
}

Scenario scenario(FaultModel f, PortGraph g, std::vector<AgentSpec> agents) {
    Scenario s;
    s.protocol = f;
    s.graph = std::make_shared<const PortGraph>(std::move(g));
    s.agents = std::move(agents);
    return s;
}

CrashSpec crash_at(Rational t, FaultModel f) {
    CrashSpec c;
    c.time = std::move(t);
    c.kind = f;
    return c;
}

void expect_gathers(const Scenario& s) {
    const RunReport r = run_and_check(s, test_support::table(), 1);
    EXPECT_EQ(r.verdict.outcome, Outcome::Pass) << r.verdict.detail;
    ASSERT_TRUE(r.verdict.gathering_time.has_value());
    EXPECT_GT(*r.verdict.gathering_time, 0);
}

}  // namespace

TEST(LabelLength, Bits) {
    EXPECT_EQ(label_length(1), 1);
    EXPECT_EQ(label_length(255), 8);
    EXPECT_EQ(label_length(256), 9);
}

TEST(PhaseBudget, MotionLinearTotalQuadratic) {
    const PolyTable& t = test_support::table();
    for (int i = 1; i <= 4; ++i) {
        const BigInt pi = t.pi(t.n_max, i);
        EXPECT_EQ(phase_budget(FaultModel::Motion, t, i), 2 * pi);
        EXPECT_EQ(phase_budget(FaultModel::Total, t, i), 12 * pi * pi);
    }
}

TEST(ComputePlan, UsesSmallestLabelAndSlowestSpeed) {
    const PolyTable& t = test_support::table();
    AgentMemory mem;
    mem.label = 9;
    for (Label l : {9u, 4u, 30u}) {
        AgentRecord r;
        r.label = l;
        r.speed = Rational(static_cast<long>(l));
        mem.records[l] = r;
    }
    mem.records[9].m = 3;
    mem.records[9].delta = make_rational(1, 5);
    mem.records[30].lowest_speed = make_rational(1, 2);

    const GatherPlan p = compute_plan(FaultModel::Motion, mem, t);
    EXPECT_EQ(p.target, 4u);
    EXPECT_EQ(p.sigma, (std::vector<Label>{4, 9, 30}));
    EXPECT_EQ(p.kappa, Rational(30));
    EXPECT_EQ(p.epsilon, make_rational(1, 2));
    EXPECT_EQ(p.delta_star, make_rational(1, 5));
    EXPECT_EQ(p.lambda, 5);
    EXPECT_EQ(p.mu_bound, std::max(BigInt(3), BigInt(2 * t.rho(3))));
    EXPECT_EQ(p.nu_star, 2 * t.rho(p.mu_bound));
    EXPECT_EQ(p.final_wait, p.bound + 2 * p.bound * p.kappa / p.epsilon);

    const GatherPlan q = compute_plan(FaultModel::Total, mem, t);
    EXPECT_EQ(q.mu_bound, 3);
    EXPECT_EQ(q.nu_star, 12 * t.rho(3) * t.rho(3));
    EXPECT_EQ(q.final_wait, q.bound + 2 * q.bound * q.kappa / q.delta_star);

    // equal memories give equal plans
    EXPECT_EQ(compute_plan(FaultModel::Motion, mem, t).final_wait, p.final_wait);
}

TEST(ComputePlan, MissingBoundIsALogicError) {
    AgentMemory mem;
    mem.label = 1;
    AgentRecord r;
    r.label = 1;
    r.speed = Rational(1);
    mem.records[1] = r;
    EXPECT_THROW(compute_plan(FaultModel::Motion, mem, test_support::table()), std::logic_error);
}

TEST(Gathering, MotionTwoAgentsNoFaults) {
    expect_gathers(scenario(FaultModel::Motion, oriented_ring(4), {agent(5, 0, Rational(1)), agent(9, 2, Rational(2))}));
}

TEST(Gathering, MotionWithMidEdgeCrash) {
    AgentSpec bad = agent(3, 1, make_rational(1, 2));
    bad.crash = crash_at(make_rational(7, 3), FaultModel::Motion);
    expect_gathers(scenario(FaultModel::Motion, path_graph(4), {agent(8, 0, Rational(1)), bad, agent(12, 3, Rational(3))}));
}

TEST(Gathering, MotionWithDormantAndPreWakeCrash) {
    AgentSpec dead = agent(2, 2, Rational(1), std::nullopt);
    dead.crash = crash_at(Rational(0), FaultModel::Motion);
    expect_gathers(scenario(FaultModel::Motion, star(5), {agent(6, 0, Rational(2)), dead, agent(7, 4, Rational(1), std::nullopt)}));
}

TEST(Gathering, TotalTwoGoodOneCrash) {
    AgentSpec bad = agent(4, 1, Rational(1));
    bad.crash = crash_at(make_rational(5, 2), FaultModel::Total);
    expect_gathers(scenario(FaultModel::Total, clique(4), {agent(10, 0, Rational(1)), bad, agent(11, 3, make_rational(3, 2))}));
}
