#pragma once

#include "gather/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gather {

// A single edge traversal as the agent perceives it.
struct PortStep {
    Port exit = 0;
    Port entry = 0;
    bool operator==(const PortStep&) const = default;
};

inline PortStep inverse(PortStep s) { return {s.entry, s.exit}; }

// Freely reduced port word: a walk with immediate back-and-forth pairs
// cancelled. Stored as a stack whose top is the first step to take.
class Route {
public:
    bool empty() const { return steps_.empty(); }
    std::size_t size() const { return steps_.size(); }
    const PortStep& next() const { return steps_.back(); }
    void pop() { steps_.pop_back(); }

    // Route from a node one step before the current origin: the step from the
    // new origin to the old one is `s`.
    void prepend(PortStep s) {
        if (!steps_.empty() && steps_.back() == inverse(s)) {
            steps_.pop_back();
        } else {
            steps_.push_back(s);
        }
    }
    // The holder moved by `moved` away from the origin; re-root there.
    void moved(PortStep moved_step) { prepend(inverse(moved_step)); }

    // First-to-last order.
    std::vector<PortStep> steps() const { return {steps_.rbegin(), steps_.rend()}; }
    static Route from_steps(const std::vector<PortStep>& first_to_last);

    bool operator==(const Route&) const = default;

private:
    std::vector<PortStep> steps_;  // reversed
};

// Universal exploration sequence: exit = (entry + x_i) mod degree, entry 0 at
// the start node. `size` is the largest node count it is certified for.
struct Ues {
    int size = 0;
    std::vector<int> terms;
};

// Stateful walker over one UES; used by every procedure that "follows R(n,v)".
class UesWalker {
public:
    UesWalker() = default;
    explicit UesWalker(const Ues* ues) : ues_(ues) {}

    bool done() const { return ues_ == nullptr || index_ >= ues_->terms.size(); }
    std::size_t index() const { return index_; }
    // Port to take at a node of the given degree.
    Port next_port(int degree) const {
        return static_cast<Port>((static_cast<long>(entry_) + ues_->terms[index_]) % degree);
    }
    // Record that the chosen step was made and entered by `entry`.
    void advance(Port entry) {
        entry_ = entry;
        ++index_;
    }

private:
    const Ues* ues_ = nullptr;
    std::size_t index_ = 0;
    Port entry_ = 0;
};

struct TrajectoryStep {
    Port exit = 0;
    NodeId node = 0;  // node reached
    Port entry = 0;
    bool operator==(const TrajectoryStep&) const = default;
};

struct Trajectory {
    NodeId start = 0;
    std::vector<TrajectoryStep> steps;
    NodeId end() const { return steps.empty() ? start : steps.back().node; }
    bool operator==(const Trajectory&) const = default;
};

Trajectory follow(const PortGraph& g, NodeId start, const Ues& ues);
Trajectory reverse(const Trajectory& t);

// Does the trajectory traverse every edge of g?
bool covers_all_edges(const PortGraph& g, const Trajectory& t);

// True when following `ues` from every start node of every graph covers all edges.
// On failure, `witness` receives "graph <i> start <v>".
bool verify_ues(const std::vector<PortGraph>& corpus, const Ues& ues, std::string* witness = nullptr);

struct UesSearch {
    int candidates = 6;     // sampled terms per greedy step
    std::size_t budget = 100000;  // maximal length
};

// Greedy seeded search. The result extends `prefix` (possibly empty) and is
// integral for every graph of the corpus with at most `size` nodes.
// Returns nullopt when the budget is exhausted.
std::optional<Ues> generate_ues(int size, const std::vector<PortGraph>& corpus, std::uint64_t seed,
                                const UesSearch& search = {}, const Ues* prefix = nullptr);

}  // namespace gather
