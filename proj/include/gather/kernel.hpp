#pragma once

#include "gather/graph.hpp"
#include "gather/memory.hpp"
#include "gather/poly_table.hpp"
#include "gather/scenario.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gather {

// ---- motion pieces and exact meeting times ---------------------------------

// Position of an agent as an affine function of time on [from_time, until].
// Still: parked at `at` (node or interior edge point).
// Moving: left node `from` towards `to` at time `depart` with `speed`.
struct MotionState {
    enum class Kind { Still, Moving } kind = Kind::Still;
    Location at;
    NodeId from = 0, to = 0;
    Rational depart;
    Rational speed;
    Rational from_time;
    std::optional<Rational> until;  // nullopt: unbounded (Still only)

    static MotionState still(Location at, Rational from_time, std::optional<Rational> until = std::nullopt);
    static MotionState moving(NodeId from, NodeId to, Rational depart, Rational speed);
    Rational end_time() const;      // arrival for Moving
    Location position(const Rational& t) const;
};

// Earliest t >= from (or > from when `strictly_after`) inside both pieces at
// which the two agents occupy the same point; nullopt if none.
std::optional<Rational> solve_meeting_time(const MotionState& a, const MotionState& b, const Rational& from,
                                           bool strictly_after = false);

// ---- trace -------------------------------------------------------------------

enum class EventKind { Crash, Wakeup, Arrive, Meet, Depart, Transition, Declare, End };
const char* event_name(EventKind k);
EventKind parse_event_kind(const std::string& s);
int event_rank(EventKind k);

struct SimEvent {
    Rational time;
    EventKind kind = EventKind::End;
    Label agent = 0;               // subject, 0 when not applicable
    std::optional<Location> where;
    std::vector<Label> agents;     // meet: participants; declare: declaring agents
    std::vector<std::pair<std::string, std::string>> fields;  // ordered key=value extras

    const std::string* field(const std::string& key) const;
};

std::string format_event(const SimEvent& e);
SimEvent parse_event(const std::string& line);

class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual bool wants(EventKind) const { return true; }
    virtual void emit(const SimEvent& e) = 0;
};

// Keeps events in memory; `compact` drops depart/arrive.
class VectorSink : public TraceSink {
public:
    explicit VectorSink(bool compact = false) : compact_(compact) {}
    bool wants(EventKind k) const override {
        return !compact_ || (k != EventKind::Depart && k != EventKind::Arrive);
    }
    void emit(const SimEvent& e) override { events.push_back(e); }
    std::vector<SimEvent> events;

private:
    bool compact_;
};

struct Trace {
    std::vector<std::pair<std::string, std::string>> header;  // provenance
    std::vector<SimEvent> events;
    bool truncated() const;
};

std::string write_trace(const Trace& t);
Trace parse_trace(const std::string& text);

// ---- agent programs ----------------------------------------------------------

// An agent co-located with the observer.
struct Peer {
    std::shared_ptr<const AgentMemory> memory;  // null for crashed agents under total faults
    bool crashed = false;
    bool declared = false;
    bool dormant = false;
    bool mid_edge = false;
    bool same_origin = true;   // mid-edge: the peer's last node is the observer's last node
};

struct NodeView {
    int degree = 0;
    Port entry = -1;           // entry port of the last arrival, -1 at the start node
    std::vector<Peer> present; // everyone else at this node now
};

struct Decision {
    enum class Kind { Move, Wait, WaitForever, Declare } kind = Kind::WaitForever;
    Port port = 0;
    Rational until;            // local time, Wait only

    static Decision move(Port p) { return {Kind::Move, p, {}}; }
    static Decision wait_until(Rational t) { return {Kind::Wait, 0, std::move(t)}; }
    static Decision forever() { return {}; }
    static Decision declare() { return {Kind::Declare, 0, {}}; }
};

class AgentContext {
public:
    virtual ~AgentContext() = default;
    virtual Rational local_time() const = 0;
    virtual void transition(const std::string& from, const std::string& to,
                            std::vector<std::pair<std::string, std::string>> payload = {}) = 0;
};

class AgentProgram {
public:
    virtual ~AgentProgram() = default;
    virtual void on_wakeup(AgentContext&) {}
    virtual void on_depart(AgentContext&, Port) {}
    // Called before meetings at the arrival instant are processed.
    virtual void on_arrival(AgentContext&, Port /*entry*/, int /*degree*/) {}
    // All agents sharing the observer's point at a new contact. Returns true
    // when a waiting agent must decide again right now.
    virtual bool on_meeting(AgentContext&, const std::vector<Peer>&) { return false; }
    virtual Decision decide(AgentContext&, const NodeView&) = 0;
    virtual void on_declare(AgentContext&) {}
    // True (once) when decide() changed something co-located agents must see
    // at this same instant; they get an extra observation of this agent.
    virtual bool take_announcement() { return false; }
    virtual std::shared_ptr<const AgentMemory> snapshot() const = 0;
};

using ProgramFactory = std::function<std::unique_ptr<AgentProgram>(const AgentSpec&, const Scenario&)>;

// ---- run -------------------------------------------------------------------------

struct RunOptions {
    std::optional<Rational> horizon;          // overrides the scenario horizon
    std::uint64_t max_events = 200'000'000;
    std::vector<std::pair<std::string, std::string>> provenance;  // copied into the end event
};

struct RunResult {
    enum class Status { Complete, Truncated, Quiescent } status = Status::Complete;
    std::string reason;
    Rational end_time;
    std::uint64_t steps = 0;   // processed kernel events
    std::uint64_t traversals = 0;
};

const char* status_name(RunResult::Status s);

RunResult run(const Scenario& s, const ProgramFactory& factory, TraceSink& sink, const RunOptions& opt = {});

}  // namespace gather
