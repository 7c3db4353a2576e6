#pragma once

#include "gather/kernel.hpp"
#include "gather/poly_table.hpp"
#include "gather/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gather {

enum class Outcome { Pass, Fail, Indeterminate };
const char* outcome_name(Outcome o);
// Process exit code for an outcome: 0 pass, 1 fail, 2 indeterminate.
int exit_code(Outcome o);

// One bound evaluated on one trace.
struct BoundCheck {
    std::string id;            // "first-meet", "declare-motion", "first-gatherer-total", "declare-total", "esst-steps", ...
    bool applicable = false;   // false: the trace has no such event, or the table cannot evaluate it
    Rational observed;         // elapsed time (or steps) since the reference instant
    Rational bound;
    std::string note;
    bool exceeded() const { return applicable && observed > bound; }
    // observed / bound as a double, for CSV output only
    double ratio() const;
};

struct Verdict {
    Outcome outcome = Outcome::Pass;
    std::vector<std::string> violated;     // property ids
    std::vector<std::size_t> witnesses;    // event indices into the trace
    std::string detail;
    std::optional<Rational> gathering_time;  // declare instant minus the earliest good wakeup
    std::vector<Label> good;               // agents without a crash event
    std::vector<Label> sigma;              // common bag (total faults), when all good agents agree
    std::vector<BoundCheck> checks;

    void fail(const std::string& property, std::size_t witness, const std::string& why);
    void merge(const Verdict& other);
};

// Gathering predicate: every good agent declares, all declarations happen at
// one instant and one node, and every good agent is at that node then.
// Requires a full trace (with depart/arrive events).
Verdict check_gathering(const Trace& trace, const Scenario& s);

// Protocol-level invariants: allowed state transitions for the fault model,
// agreement of all good agents on the target, and (total faults) equal bags.
Verdict check_protocol(const Trace& trace, const Scenario& s);

// Certified-table evaluation of the time bounds. Indeterminate when the graph
// is larger than the table's n_max or a label is longer than it covers.
Verdict check_bounds(const Trace& trace, const Scenario& s, const PolyTable& table);

// All three checks merged; a truncated trace is indeterminate.
Verdict check_all(const Trace& trace, const Scenario& s, const PolyTable& table);

// Why the table cannot vouch for this scenario (graph too large, label too
// long, graph not explored by the table's sequence), or nullopt.
std::optional<std::string> outside_certification(const Scenario& s, const PolyTable& table);

// A priori upper bound on the declaration time computed from the scenario
// and the table alone, before any run.
Rational declare_bound_apriori(const Scenario& s, const PolyTable& table);
// 4x the a priori declaration bound.
Rational default_horizon(const Scenario& s, const PolyTable& table);

// ---- running -----------------------------------------------------------------

struct RunReport {
    Trace trace;
    RunResult result;
    Verdict verdict;
};

// Simulates the scenario with the gathering algorithm (horizon: the
// scenario's, else the default) and checks the trace.
RunReport run_and_check(const Scenario& s, const PolyTable& table, std::uint64_t seed = 0);

std::vector<std::pair<std::string, std::string>> provenance(const Scenario& s, const PolyTable& table, std::uint64_t seed);
std::string scenario_hash(const Scenario& s);

// ---- impossibility demonstration --------------------------------------------

struct DemoCase {
    std::string name;
    Scenario one_good, two_good;
    Rational two_good_time;        // gathering time of the 2-good run
    Outcome two_good_outcome = Outcome::Indeterminate;
    Rational horizon;              // 10x the 2-good gathering time
    bool one_good_declared = false;
    bool one_good_left_cruiser = false;
    Rational cruiser_duration;     // time the good agent spent as cruiser
    bool passed() const { return two_good_outcome == Outcome::Pass && !one_good_declared && !one_good_left_cruiser; }
};

// Base 4-ring (k = 1) and the ring of size 4(t1 + t2).
std::vector<DemoCase> demo_impossibility(const PolyTable& table, int t1, int t2);

// ---- sweeps -----------------------------------------------------------------------

struct SweepConfig {
    FaultModel protocol = FaultModel::Motion;
    int scenarios = 100;
    int n_min = 3, n_max = 0;      // n_max 0: the table's n_max
    int k_min = 2, k_max = 5;
    Label label_max = 1u << 16;
    int crash_permille = 400;
    int min_good = 0;              // 0: 1 (motion) / 2 (total)
    std::vector<PortGraph> graphs; // empty: the certification corpus
};

struct SweepRow {
    int id = 0;
    int n = 0, k = 0, crashes = 0;
    FaultModel protocol = FaultModel::Motion;
    Outcome outcome = Outcome::Indeterminate;
    std::optional<Rational> gathering_time;
    std::vector<BoundCheck> checks;
    std::string detail;
    std::uint64_t events = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    int pass = 0, fail = 0, indeterminate = 0;
    Outcome overall() const;
};

// Deterministic in (config, seed, table). Per-scenario exceptions become
// failing rows carrying the message.
SweepReport sweep(const SweepConfig& cfg, const PolyTable& table, std::uint64_t seed);
Scenario sweep_scenario(const SweepConfig& cfg, const PolyTable& table, std::uint64_t seed, int index);

std::string sweep_csv(const SweepReport& r);
std::string sweep_text(const SweepReport& r);

}  // namespace gather
