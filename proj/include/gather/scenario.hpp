#pragma once

#include "gather/graph.hpp"
#include "gather/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gather {

using Label = std::uint64_t;

enum class FaultModel { Motion, Total };
const char* fault_name(FaultModel f);
FaultModel parse_fault(const std::string& s);

// Crash either at a fixed time or reactively, `delay` after a trigger.
struct CrashSpec {
    enum class When { At, OnState, AfterMeet } when = When::At;
    Rational time;          // When::At
    std::string state;      // When::OnState: role name, e.g. "explorer"
    Label other = 0;        // When::AfterMeet
    Rational delay;         // reactive delay, > 0
    FaultModel kind = FaultModel::Motion;
};

struct AgentSpec {
    Label label = 0;
    Rational speed{1};
    NodeId start = 0;
    std::optional<Rational> wake;   // nullopt: dormant until visited
    std::optional<CrashSpec> crash;
};

struct Scenario {
    std::shared_ptr<const PortGraph> graph;
    FaultModel protocol = FaultModel::Motion;
    std::vector<AgentSpec> agents;
    std::optional<Rational> horizon;  // nullopt: derive from the certified bounds

    const AgentSpec* find(Label l) const;
    bool is_good(Label l) const;      // scheduled never to crash (the run may still suppress a crash)
};

struct ValidationIssue {
    std::string code;     // "duplicate-label", "shared-start", "bad-speed", ...
    std::string detail;
    bool warning = false; // accepted, but tagged (e.g. "impossibility-regime")
};

std::vector<ValidationIssue> validate(const Scenario& s);
// True when no issue is an error (warnings allowed).
bool accepted(const std::vector<ValidationIssue>& issues);

// Scenario-level statistics: minimum and maximum speed, longest label
// length, and the speed ratio kappa / epsilon.
struct ScenarioStats {
    Rational epsilon, kappa, r;
    int lambda = 0;
    int good = 0;
};
ScenarioStats scenario_stats(const Scenario& s);

struct GenConfig {
    FaultModel protocol = FaultModel::Motion;
    int k_min = 2, k_max = 5;
    Label label_max = 1u << 16;
    Rational speed_min{1, 8}, speed_max{8};
    int speed_den = 8;              // speeds are multiples of 1/speed_den
    int crash_permille = 400;
    int min_good = 1;               // 2 for total faults
    int dormant_permille = 250;     // agents without an adversary wakeup
    Rational wake_spread{64};       // adversary wakeups in [0, wake_spread]
    Rational early_window{200000};  // crash times sampled in the early window ...
    Rational horizon_hint{1000000000};  // ... or log-uniformly up to this
    int reactive_permille = 0;      // share of crashes using reactive triggers
};

class UnsatisfiableConfig : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Scenario gen_random(std::shared_ptr<const PortGraph> g, const GenConfig& cfg, std::uint64_t seed);

// Ring lower-bound construction. k = 1: 4-node ring, bodies at nodes 0 and 2,
// one good agent at node 1. Otherwise a ring of 4(t1+t2) nodes, bodies at all
// even nodes and good agents at the two antipodal odd nodes 1 and 1+size/2.
// `good_agents` selects the 1-good (impossibility) or 2-good (control) variant.
Scenario lower_bound_ring(int k, int t1, int t2, int good_agents);

std::string write_scenario(const Scenario& s);
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");
Scenario read_scenario_file(const std::string& path);

std::string crash_str(const CrashSpec& c);

}  // namespace gather
