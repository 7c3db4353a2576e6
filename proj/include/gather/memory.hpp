#pragma once

#include "gather/rational.hpp"
#include "gather/scenario.hpp"
#include "gather/sequences.hpp"

#include <map>
#include <optional>
#include <string>

namespace gather {

enum class Role { Cruiser, Explorer, Token, Finder, Recycled, Gatherer };
const char* role_name(Role r);

// What an agent knows about another agent (or itself).
struct AgentRecord {
    Label label = 0;
    Rational speed;
    Route route;               // from the holder's anchor node to the agent's start node
    Rational lowest_speed;     // lowest speed that agent was aware of
    std::optional<BigInt> m;   // adopted upper bound, once a gatherer
    std::optional<Rational> delta;
};

// Everything another agent can read at a meeting. Plain data: copying it is
// how the kernel takes snapshots.
struct AgentMemory {
    Label label = 0;
    Rational speed;
    Role role = Role::Cruiser;
    std::string phase;          // sub-phase, e.g. "red" for gatherers
    bool declared = false;

    // anchor = current node, or the node the current traversal started from
    bool moving = false;
    Port exit_port = 0;

    std::map<Label, AgentRecord> records;  // includes the agent itself

    // role data
    Label token = 0;            // explorer: its token
    Label culprit = 0;          // finder / recycled explorer
    std::optional<BigInt> m;    // adopted bound

    // explorer progress, read by the token at each return
    int report_seq = 0;         // incremented on every end-of-phase return
    int next_phase = 3;
    bool esst_done = false;
    BigInt esst_steps = 0;

    const AgentRecord& self() const { return records.at(label); }
};

}  // namespace gather
