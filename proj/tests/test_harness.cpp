#include "gather/harness.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace gather;

namespace {

AgentSpec agent(Label l, NodeId start, Rational speed = Rational(1)) {
    AgentSpec a;
    a.label = l;
    a.start = start;
    a.speed = std::move(speed);
    a.wake = Rational(0);
    return a;
}

// Ring of 4 with agents 1 (node 0) and 2 (node 2); agent 3 optional at node 3.
Scenario ring_scenario(bool third = false) {
    Scenario s;
    s.protocol = FaultModel::Motion;
    s.graph = std::make_shared<const PortGraph>(oriented_ring(4));
    s.agents = {agent(1, 0), agent(2, 2)};
    if (third) s.agents.push_back(agent(3, 3));
    return s;
}

Trace trace_of(const std::vector<std::string>& lines) {
    Trace t;
    for (const auto& l : lines) t.events.push_back(parse_event(l));
    return t;
}

const BoundCheck* find_check(const Verdict& v, const std::string& id) {
    for (const auto& l : v.checks)
        if (l.id == id) return &l;
    return nullptr;
}

bool violated(const Verdict& v, const std::string& id) {
    return std::find(v.violated.begin(), v.violated.end(), id) != v.violated.end();
}

// Agent 1 walks 0 -> 1 -> 2 and both declare there at time 2.
const std::vector<std::string> kGathered = {
    "t=0 kind=wakeup agent=1 at=n0 cause=adversary",
    "t=0 kind=wakeup agent=2 at=n2 cause=adversary",
    "t=0 kind=depart agent=1 at=n0 port=0",
    "t=1 kind=arrive agent=1 at=n1",
    "t=1 kind=depart agent=1 at=n1 port=0",
    "t=2 kind=arrive agent=1 at=n2",
    "t=2 kind=meet at=n2 agents=1,2",
    "t=2 kind=declare at=n2 agents=1,2",
    "t=2 kind=end status=complete",
};

}  // namespace

TEST(CheckGathering, AcceptsACleanDeclaration) {
    const Verdict v = check_gathering(trace_of(kGathered), ring_scenario());
    EXPECT_EQ(v.outcome, Outcome::Pass) << v.detail;
    ASSERT_TRUE(v.gathering_time);
    EXPECT_EQ(*v.gathering_time, Rational(2));
    EXPECT_EQ(v.good, (std::vector<Label>{1, 2}));
}

TEST(CheckGathering, DeclaringWhileAGoodAgentIsMidEdgeFails) {
    auto lines = kGathered;
    // declare at 3/2 while agent 1 is halfway along edge 1-2
    lines[5] = "t=3/2 kind=declare at=n2 agents=2";
    lines[6] = "t=2 kind=arrive agent=1 at=n2";
    lines[7] = "t=2 kind=declare at=n2 agents=1";
    const Verdict v = check_gathering(trace_of(lines), ring_scenario());
    EXPECT_EQ(v.outcome, Outcome::Fail);
    EXPECT_TRUE(violated(v, "gathering.b"));
    EXPECT_TRUE(violated(v, "gathering.c"));
    EXPECT_FALSE(v.witnesses.empty());
}

TEST(CheckGathering, SilentGoodAgentFails) {
    auto lines = kGathered;
    lines[7] = "t=2 kind=declare at=n2 agents=2";
    const Verdict v = check_gathering(trace_of(lines), ring_scenario());
    EXPECT_TRUE(violated(v, "gathering.a"));
}

TEST(CheckGathering, CrashedAgentMayBeElsewhere) {
    auto lines = kGathered;
    lines.insert(lines.begin() + 2, "t=0 kind=wakeup agent=3 at=n3 cause=adversary");
    lines.insert(lines.begin() + 3, "t=1/2 kind=crash agent=3 at=n3 fault=motion");
    const Verdict v = check_gathering(trace_of(lines), ring_scenario(true));
    EXPECT_EQ(v.outcome, Outcome::Pass) << v.detail;
    EXPECT_EQ(v.good, (std::vector<Label>{1, 2}));
}

TEST(CheckGathering, TruncatedTraceIsIndeterminate) {
    auto lines = kGathered;
    lines.back() = "t=2 kind=end status=truncated";
    EXPECT_EQ(check_gathering(trace_of(lines), ring_scenario()).outcome, Outcome::Indeterminate);
    lines.pop_back();
    EXPECT_EQ(check_gathering(trace_of(lines), ring_scenario()).outcome, Outcome::Indeterminate);
}

TEST(CheckProtocol, RejectsForbiddenTransitions) {
    auto lines = kGathered;
    lines.insert(lines.begin() + 2, "t=0 kind=transition agent=1 from=cruiser to=gatherer/final");
    const Verdict v = check_protocol(trace_of(lines), ring_scenario());
    EXPECT_EQ(v.outcome, Outcome::Fail);
    EXPECT_TRUE(violated(v, "state-graph"));
}

TEST(Outcome, ExitCodes) {
    EXPECT_EQ(exit_code(Outcome::Pass), 0);
    EXPECT_EQ(exit_code(Outcome::Fail), 1);
    EXPECT_EQ(exit_code(Outcome::Indeterminate), 2);
}

TEST(Certification, ScopeOfTheTable) {
    const PolyTable& t = test_support::table();
    Scenario s = ring_scenario();
    EXPECT_FALSE(outside_certification(s, t));
    s.agents[0].speed = Rational(9);
    EXPECT_TRUE(outside_certification(s, t));
    s = ring_scenario();
    s.agents[0].label = Label{1} << t.label_len_max;
    EXPECT_TRUE(outside_certification(s, t));
    s = ring_scenario();
    s.graph = std::make_shared<const PortGraph>(oriented_ring(t.n_max + 1));
    EXPECT_TRUE(outside_certification(s, t));
}

// Two good agents: the first meeting comes within Pi(n, Lambda) / epsilon.
TEST(RealRuns, FirstMeetingBoundOnTwoAgents) {
    const PolyTable& t = test_support::table();
    Scenario s = ring_scenario();
    s.agents[0].speed = make_rational(1, 2);
    s.agents[1].label = 300;
    const RunReport r = run_and_check(s, t, 3);
    EXPECT_EQ(r.verdict.outcome, Outcome::Pass) << r.verdict.detail;
    const BoundCheck* l = find_check(r.verdict, "first-meet");
    ASSERT_NE(l, nullptr);
    ASSERT_TRUE(l->applicable);
    EXPECT_EQ(l->bound, Rational(t.Pi(4, 9)) / make_rational(1, 2));
    EXPECT_LE(l->observed, l->bound);
}

// Negative control: the same trace judged against a table with shrunken
// bounds must report exceedances.
TEST(RealRuns, ShrunkenTableIsCaught) {
    const PolyTable& t = test_support::table();
    Scenario s = ring_scenario(true);
    s.agents[2].speed = Rational(3);
    const RunReport r = run_and_check(s, t, 4);
    ASSERT_EQ(r.verdict.outcome, Outcome::Pass) << r.verdict.detail;

    PolyTable small = t;
    for (auto& v : small.rho_) v /= 100;
    for (auto& row : small.Pi_)
        for (auto& v : row) v /= 100;
    const Verdict v = check_bounds(r.trace, s, small);
    EXPECT_EQ(v.outcome, Outcome::Fail);
    EXPECT_TRUE(violated(v, "declare-motion")) << v.detail;
}

// Property: a sweep is a pure function of (config, seed, table).
TEST(Sweep, DeterministicAndOneRowPerScenario) {
    const PolyTable& t = test_support::table();
    SweepConfig cfg;
    cfg.scenarios = 3;
    cfg.n_max = 5;
    cfg.k_max = 3;
    const SweepReport a = sweep(cfg, t, 17);
    const SweepReport b = sweep(cfg, t, 17);
    EXPECT_EQ(sweep_csv(a), sweep_csv(b));
    EXPECT_EQ(a.rows.size(), 3u);
    EXPECT_EQ(a.pass + a.fail + a.indeterminate, 3);
    std::istringstream in(sweep_csv(a));
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 4);
    EXPECT_EQ(a.overall(), Outcome::Pass) << sweep_text(a);
}
