#include "gather/kernel.hpp"
#include "gather/protocols.hpp"
#include "meeting_oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace gather;

namespace {

AgentSpec agent(Label l, NodeId start, Rational speed = Rational(1), std::optional<Rational> wake = Rational(0)) {
    AgentSpec a;
    a.label = l;
    a.start = start;
    a.speed = std::move(speed);
    a.wake = std::move(wake);
    return a;
}

Scenario on_ring(int n, std::vector<AgentSpec> agents) {
    Scenario s;
    s.graph = std::make_shared<const PortGraph>(oriented_ring(n));
    s.agents = std::move(agents);
    s.horizon = Rational(100);
    return s;
}

// Agent 1 follows `a`, everybody else follows `b`.
ProgramFactory two_scripts(std::vector<Port> a, std::vector<Port> b) {
    return [a, b](const AgentSpec& spec, const Scenario& s) {
        return scripted_factory(spec.label == 1 ? a : b)(spec, s);
    };
}

std::vector<SimEvent> of_kind(const std::vector<SimEvent>& ev, EventKind k) {
    std::vector<SimEvent> out;
    std::copy_if(ev.begin(), ev.end(), std::back_inserter(out), [&](const SimEvent& e) { return e.kind == k; });
    return out;
}

}  // namespace

TEST(MeetingTime, HeadOnOnOneEdge) {
    const auto a = MotionState::moving(0, 1, Rational(0), Rational(1));
    const auto b = MotionState::moving(1, 0, Rational(0), Rational(1));
    EXPECT_EQ(solve_meeting_time(a, b, Rational(0)), make_rational(1, 2));
}

TEST(MeetingTime, FasterAgentCatchesUp) {
    const auto slow = MotionState::moving(0, 1, Rational(0), Rational(1));
    const auto fast = MotionState::moving(0, 1, make_rational(1, 4), Rational(2));
    EXPECT_EQ(solve_meeting_time(slow, fast, Rational(0)), make_rational(1, 2));
    EXPECT_EQ(fast.position(make_rational(1, 2)), Location::on_edge(0, 1, make_rational(1, 2)));
}

TEST(MeetingTime, StillCoincidenceIsNotANewMeeting) {
    const auto a = MotionState::still(Location::of_node(2), Rational(0));
    const auto b = MotionState::still(Location::of_node(2), Rational(1));
    EXPECT_EQ(solve_meeting_time(a, b, Rational(0)), Rational(1));
    EXPECT_EQ(solve_meeting_time(a, b, Rational(1), true), std::nullopt);
}

TEST(MeetingTime, DifferentEdgesMeetOnlyAtSharedNode) {
    const auto a = MotionState::moving(0, 1, Rational(0), Rational(2));
    const auto b = MotionState::still(Location::of_node(1), Rational(0), Rational(3));
    EXPECT_EQ(solve_meeting_time(a, b, Rational(0)), make_rational(1, 2));
    const auto c = MotionState::moving(2, 1, Rational(0), Rational(1));
    EXPECT_EQ(solve_meeting_time(a, c, Rational(0)), std::nullopt);  // a arrives at 1/2, c at 1
}

// Property: the exact solver agrees with the grid oracle.
TEST(MeetingTime, AgreesWithGridOracle) {
    Rng rng(7);
    for (int i = 0; i < 120; ++i) {
        const oracle::Fixture f = oracle::random_fixture(rng);
        EXPECT_EQ(solve_meeting_time(f.a, f.b, f.from, f.strictly_after), oracle::brute_force(f)) << f.describe();
    }
}

TEST(Kernel, VisitWakesDormantAgentAndMeets) {
    const Scenario s = on_ring(4, {agent(1, 0), agent(2, 1, Rational(1), std::nullopt)});
    VectorSink sink;
    const RunResult r = run(s, port_zero_once_factory(), sink);
    const auto wakes = of_kind(sink.events, EventKind::Wakeup);
    ASSERT_EQ(wakes.size(), 2u);
    EXPECT_EQ(wakes[1].agent, 2u);
    EXPECT_EQ(wakes[1].time, Rational(1));
    EXPECT_EQ(*wakes[1].field("cause"), "visit:1");
    const auto meets = of_kind(sink.events, EventKind::Meet);
    ASSERT_FALSE(meets.empty());
    EXPECT_EQ(meets[0].time, Rational(1));
    EXPECT_EQ(meets[0].where, Location::of_node(1));
    EXPECT_NE(r.status, RunResult::Status::Truncated);
}

TEST(Kernel, MidEdgeMeeting) {
    // agent 1 walks 0 -> 1, agent 2 walks 1 -> 0 twice as fast
    const Scenario s = on_ring(5, {agent(1, 0), agent(2, 1, Rational(2))});
    VectorSink sink;
    run(s, two_scripts({0}, {1}), sink);
    const auto meets = of_kind(sink.events, EventKind::Meet);
    ASSERT_FALSE(meets.empty());
    EXPECT_EQ(meets[0].time, make_rational(1, 3));
    EXPECT_EQ(meets[0].where, Location::on_edge(0, 1, make_rational(1, 3)));
}

TEST(Kernel, CrashFreezesAgentMidEdge) {
    AgentSpec a = agent(1, 0);
    a.crash = CrashSpec{};
    a.crash->time = make_rational(1, 2);
    const Scenario s = on_ring(4, {a, agent(2, 2)});
    VectorSink sink;
    run(s, port_zero_once_factory(), sink);
    const auto crashes = of_kind(sink.events, EventKind::Crash);
    ASSERT_EQ(crashes.size(), 1u);
    EXPECT_EQ(crashes[0].where, Location::on_edge(0, 1, make_rational(1, 2)));
    EXPECT_TRUE(of_kind(sink.events, EventKind::Arrive).size() == 1u);  // only agent 2 arrives
}

TEST(Kernel, EventsAreTimeOrderedAndEndLast) {
    const Scenario s = on_ring(6, {agent(1, 0, make_rational(3, 2)), agent(2, 3, make_rational(1, 2)), agent(3, 5)});
    VectorSink sink;
    run(s, scripted_factory({0, 0, 1, 0, 0}, make_rational(1, 3)), sink);
    ASSERT_FALSE(sink.events.empty());
    EXPECT_EQ(sink.events.back().kind, EventKind::End);
    for (std::size_t i = 1; i < sink.events.size(); ++i) EXPECT_LE(sink.events[i - 1].time, sink.events[i].time);
}

TEST(Kernel, HorizonTruncates) {
    const Scenario s = on_ring(4, {agent(1, 0), agent(2, 2)});
    VectorSink sink;
    RunOptions opt;
    opt.horizon = make_rational(1, 2);
    const RunResult r = run(s, scripted_factory(std::vector<Port>(50, 0)), sink, opt);
    EXPECT_EQ(r.status, RunResult::Status::Truncated);
    Trace t;
    t.events = sink.events;
    EXPECT_TRUE(t.truncated());
}

TEST(Trace, TextRoundTrip) {
    const Scenario s = on_ring(5, {agent(1, 0), agent(2, 2, Rational(3)), agent(3, 4, Rational(1), std::nullopt)});
    VectorSink sink;
    run(s, scripted_factory({0, 1, 1, 0}), sink);
    Trace t;
    t.header = {{"seed", "9"}, {"note", "round-trip"}};
    t.events = sink.events;
    const std::string text = write_trace(t);
    const Trace back = parse_trace(text);
    EXPECT_EQ(write_trace(back), text);
    ASSERT_EQ(back.events.size(), t.events.size());
    for (std::size_t i = 0; i < t.events.size(); ++i) EXPECT_EQ(format_event(back.events[i]), format_event(t.events[i]));
}

TEST(Trace, FieldValuesWithSpacesSurvive) {
    SimEvent e;
    e.time = make_rational(7, 2);
    e.kind = EventKind::End;
    e.fields = {{"reason", "no pending event"}, {"note", "50% done"}};
    const SimEvent back = parse_event(format_event(e));
    EXPECT_EQ(*back.field("reason"), "no pending event");
    EXPECT_EQ(*back.field("note"), "50% done");
}

TEST(Trace, MalformedLinesAreRejected) {
    EXPECT_THROW(parse_event("kind=meet"), std::invalid_argument);
    EXPECT_THROW(parse_event("t=1 kind=meet junk"), std::invalid_argument);
    EXPECT_ANY_THROW(parse_event("t=1 kind=teleport"));
}

// Property: identical inputs give byte-identical traces.
TEST(Kernel, Deterministic) {
    const Scenario s = on_ring(7, {agent(1, 0, make_rational(5, 4)), agent(2, 3), agent(3, 5, Rational(2))});
    std::string first;
    for (int rep = 0; rep < 3; ++rep) {
        VectorSink sink;
        run(s, scripted_factory({0, 0, 1, 0, 1, 1}, make_rational(1, 7)), sink);
        Trace t;
        t.events = sink.events;
        const std::string text = write_trace(t);
        if (rep == 0)
            first = text;
        else
            EXPECT_EQ(text, first);
    }
}
