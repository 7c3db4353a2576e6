#pragma once

#include "gather/poly_table.hpp"
#include "gather/sequences.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace gather {

// Every procedure is a step machine driven from the agent's decisions:
//   next(degree, ...) at a node -> a port to take, or "done";
//   arrived(entry, degree) after the chosen move completed.

// Ball(w): every directed path of length 2 from w, walked out and back.
// Uses 4 * sum_{x in N(w)} deg(x) traversals.
class BallWalk {
public:
    std::optional<Port> next(int degree);
    void arrived(Port entry, int degree);
    bool done() const { return stage_ == Stage::Done; }
    std::uint64_t traversals() const { return traversals_; }

private:
    enum class Stage { Start, AtW, AtX, AtY, Done };
    Stage stage_ = Stage::Start;
    int dw_ = 0, dx_ = 0;
    Port p_ = 0, r_ = 0, e1_ = 0, e2_ = 0;
    std::uint64_t traversals_ = 0;
};

// R*(m, v): Ball(v), then after every step of R(m, v) a Ball at the reached node.
class RStarWalk {
public:
    explicit RStarWalk(const Ues* ues) : walker_(ues) {}
    std::optional<Port> next(int degree);
    void arrived(Port entry, int degree);
    bool done() const { return done_; }
    std::uint64_t traversals() const { return traversals_; }

private:
    UesWalker walker_;
    BallWalk ball_;
    bool r_step_pending_ = false;
    bool done_ = false;
    std::uint64_t traversals_ = 0;
};

// Exploration with a semi-stationary token, in three variants:
//  Plain    - phases 3, 6, 9, ...; phase i+3 starts where phase i stopped.
//  Modified - every phase starts at the token and ends with a return to it.
//  Star     - Modified, plus a round trip to the token after each green step
//             that reveals a crashed agent; a missing token aborts.
class Esst {
public:
    enum class Variant { Plain, Modified, Star };
    enum class Outcome { Running, Finished, TokenLost };

    struct Action {
        Outcome outcome = Outcome::Running;
        Port port = 0;  // valid while Running
    };

    Esst(Variant v, const PolyTable* table) : variant_(v), table_(table) {}

    // At a node. `token_here`: the token is at this node now; `crashed_here`:
    // some crashed agent (not known to be the token) is at this node now.
    Action next(int degree, bool token_here, bool crashed_here);
    // The move chosen by the last next() completed, entering by `entry`.
    void arrived(Port entry, int degree);
    // Sightings in the interior of the edge currently traversed.
    void sighted_mid_edge(bool token, bool crashed);

    int phase() const { return phase_; }
    bool finished() const { return stage_ == Stage::Finished; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t green_steps() const { return green_steps_; }
    std::uint64_t blue_steps() const { return steps_ - green_steps_; }
    // Incremented whenever a Modified/Star agent is back at its token after a
    // phase; `next_phase()` is the phase it starts next.
    int reports() const { return reports_; }
    int next_phase() const { return phase_; }

    // (phase, green steps of that phase including its closing return)
    const std::vector<std::pair<int, std::uint64_t>>& phase_log() const { return phase_log_; }

private:
    enum class Stage { StartPhase, Trunc, TruncBack, ExcStart, Excursion, ExcBack, ToNext, Return, Blue, BlueBack, Finished };
    using Code = std::vector<int>;

    Action green(int degree, bool token_here, bool mid_tok);
    void abort_phase();
    void complete_phase();
    void close_phase(bool completed);
    Action move(Port p, bool is_green);

    Variant variant_;
    const PolyTable* table_;
    int phase_ = 3;
    Stage stage_ = Stage::StartPhase;
    bool completed_ = false;

    UesWalker walker_;
    std::vector<PortStep> trunc_;
    std::size_t back_index_ = 0;
    std::size_t j_ = 0;            // index of the current trunc node
    bool clean_ = true;
    bool token_seen_ = false;
    std::vector<PortStep> exc_;
    std::set<Code> codes_;

    Route to_base_;                // route from the current node to the phase start
    Port pending_exit_ = 0;
    bool pending_green_ = false;
    bool mid_token_ = false, mid_crashed_ = false;

    // Star: blue round trips
    Stage resume_ = Stage::StartPhase;
    std::vector<PortStep> blue_trail_;
    bool saved_token_here_ = false;
    bool saved_mid_token_ = false;
    bool last_was_green_ = false;
    bool lost_ = false;

    std::uint64_t steps_ = 0, green_steps_ = 0, phase_steps_ = 0;
    int reports_ = 0;
    std::vector<std::pair<int, std::uint64_t>> phase_log_;
};

}  // namespace gather
