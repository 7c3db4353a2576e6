#pragma once

#include "gather/graph.hpp"
#include "gather/poly_table.hpp"
#include "gather/sequences.hpp"

#include <cstdint>
#include <vector>

namespace gather {

using Label = std::uint64_t;

struct MeetingAction {
    enum class Kind { Move, Wait } kind = Kind::Move;
    Port port = 0;        // Move
    Rational duration;    // Wait, in time units

    static MeetingAction move(Port p) { return {Kind::Move, p, {}}; }
    static MeetingAction wait(Rational d) { return {Kind::Wait, 0, std::move(d)}; }
    bool is_wait() const { return kind == Kind::Wait; }
};

// Label-driven rendezvous for two agents of unknown, unequal speeds.
//
// The policy alternates bursts and waits. Burst j explores with R(s_j) from
// the home node and retraces it, s_j = min(j+1, n_max); wait j lasts
// g(L) * 4^j time units with g(L) = (L+2)/(L+1). Two distinct labels give
// wait ratios that are never powers of 4, so the gap sequences of two agents
// drift apart until a burst of one agent falls into a wait of the other, at
// which point the explorer finds the waiting agent at home.
class MeetingPolicy {
public:
    static constexpr const char* kName = "sparse-burst/1";

    MeetingPolicy() = default;
    MeetingPolicy(Label label, const PolyTable* table) : label_(label), table_(table) { start_burst(); }

    // `entry_port` is the port by which the agent entered its current node on
    // its last move (ignored right after a wait or at the very start).
    MeetingAction next_action(int degree, Port entry_port);

    std::uint64_t traversals_so_far() const { return traversals_; }
    int burst() const { return burst_; }

    static Rational label_scale(Label label);
    static Rational wait_length(Label label, int burst);

private:
    enum class Last { None, Forward, Backward, Wait };
    void start_burst();

    Label label_ = 0;
    const PolyTable* table_ = nullptr;
    int burst_ = 0;
    UesWalker walker_;
    std::vector<Port> back_;  // entry ports of the forward part, to retrace
    Last last_ = Last::None;
    std::uint64_t traversals_ = 0;
};

}  // namespace gather
