#pragma once

#include "gather/graph.hpp"
#include "gather/poly_table.hpp"
#include "gather/procedures.hpp"
#include "gather/scenario.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gather {

// ---- corpus ----------------------------------------------------------------

struct CorpusOptions {
    int n_max = 10;
    int exhaustive_max = 6;      // every connected class up to this size ...
    int relabelings = 3;         // ... with this many extra port labelings
    int random_per_size = 60;    // random trees and random connected graphs per larger size
    std::uint64_t seed = 1;
};

// Graphs of sizes 2..n_max: exhaustive classes (plus relabelings) up to
// exhaustive_max, then rings, paths, stars, cliques, random trees and random
// connected graphs. Deterministic in the options.
std::vector<PortGraph> build_corpus(const CorpusOptions& opt);
std::string corpus_hash(const std::vector<PortGraph>& corpus);

// ---- ESST measurement --------------------------------------------------------

// Where the token lives during a measurement run. The token stays on the
// extended edge {a, b}; with a == b it is a static token at node a.
struct TokenSchedule {
    NodeId a = 0, b = 0;
    enum class Mode { Static, Interior, Shuttle } mode = Mode::Static;
    int move_permille = 300;     // Shuttle: chance to change position per explorer step
};

struct EsstRun {
    bool finished = false;
    bool covered = false;        // every edge traversed by the time it finished
    std::uint64_t steps = 0;
    std::vector<std::pair<int, std::uint64_t>> phases;
};

// Runs ESST against a semi-stationary token with discrete-time semantics:
// the token is at a, at b, or inside the edge between explorer steps; an
// explorer crossing that edge while the token is inside sees it mid-edge.
EsstRun run_esst_discrete(const PortGraph& g, NodeId start, const TokenSchedule& token, Esst::Variant variant,
                          const PolyTable& table, std::uint64_t seed, std::uint64_t step_cap = 50'000'000);

// ---- Meeting measurement -----------------------------------------------------

// Meeting efforts are certified for agent speeds in [1/8, 8]; waiting lasts
// the same time at any speed, so faster agents spend more effort per meeting.
inline const Rational kCertifiedSpeedMin{1, 8};
inline const Rational kCertifiedSpeedMax{8};

struct MeetingRun {
    bool met = false;
    Rational time;               // meeting time (global)
    Rational effort;             // min speed x (meeting time - later start)
    std::uint64_t traversals = 0;
};

struct MeetingCase {
    Label l1 = 1, l2 = 2;
    Rational v1{1}, v2{1};
    NodeId s1 = 0, s2 = 1;
    Rational w1{0};
    std::optional<Rational> w2{Rational(0)};  // nullopt: agent 2 dormant
    std::optional<Rational> crash2;           // agent 2 stops for good at this time
};

// Two agents running only the Meeting policy until their first meeting.
MeetingRun run_meeting_pair(const PortGraph& g, const MeetingCase& c, const PolyTable& table, const Rational& horizon);

// ---- certification -------------------------------------------------------------

struct CertifyOptions {
    int n_max = 10;
    int label_len_max = 17;
    std::uint64_t seed = 1;
    Rational safety_factor{2};
    std::size_t ues_budget = 100000;
    int esst_runs_per_graph = 0;     // 0: 4 per node
    int meeting_graphs_per_size = 3;
    int meeting_hard_graphs = 2;     // plus the hardest graphs of each size for aligned meetings
    int meeting_cases_per_length = 12;
    std::function<void(const std::string&)> log;
};

class CertificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

PolyTable certify(const std::vector<PortGraph>& corpus, const CertifyOptions& opt);

// Re-runs a deterministic sample of certification runs and checks that no
// measured value exceeds the table. Returns a witness description or nullopt.
std::optional<std::string> replay_certification(const std::vector<PortGraph>& corpus, const PolyTable& table,
                                                const CertifyOptions& opt);

}  // namespace gather
