#pragma once

#include "gather/kernel.hpp"
#include "gather/memory.hpp"
#include "gather/poly_table.hpp"

#include <string>
#include <vector>

namespace gather {

// Number of bits of a label ("log L" in the bound formulas).
int label_length(Label l);

// What a gatherer computes at the end of its red period. A pure function of
// its memory and the table: equal memories give equal plans.
struct GatherPlan {
    Label target = 0;              // smallest label known
    std::vector<Label> sigma;      // labels in the record set (the bag, for total faults)
    BigInt mu_bound;               // motion: bound on every adopted m; total: m*
    BigInt nu_star;
    Rational delta_star, kappa, epsilon;
    int lambda = 1;
    Rational bound;                // phi (motion) or psi (total)
    Rational final_wait;           // tau'
};

// Throws std::logic_error naming the missing datum when the memory lacks what
// the plan needs (no record with an adopted m, no speed information).
GatherPlan compute_plan(FaultModel f, const AgentMemory& mem, const PolyTable& table);

// Token-side time budget for one phase of the explorer's exploration, in
// traversals: 2 pi_i (motion) or 12 pi_i^2 (total).
BigInt phase_budget(FaultModel f, const PolyTable& table, int phase);

// The gathering algorithms; the scenario's protocol field selects the variant.
ProgramFactory gathering_factory(const PolyTable* table);

// Simple programs used by kernel tests.
ProgramFactory wait_forever_factory();
// Takes port 0 once after waking, then waits forever.
ProgramFactory port_zero_once_factory();
// Waits `pause`, takes the next listed port (modulo the degree), and so on;
// waits forever once the list is used up.
ProgramFactory scripted_factory(std::vector<Port> ports, Rational pause = 0);

}  // namespace gather
