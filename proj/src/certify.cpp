#include "gather/certify.hpp"

#include "gather/kernel.hpp"
#include "gather/meeting_policy.hpp"
#include "gather/protocols.hpp"
#include "gather/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace gather {

// ---- corpus ----------------------------------------------------------------------

std::vector<PortGraph> build_corpus(const CorpusOptions& opt) {
    std::vector<PortGraph> out;
    const int ex = std::min(opt.exhaustive_max, opt.n_max);
    for (auto& g : enumerate_connected(ex, opt.relabelings, mix_seed(opt.seed, 1)))
        if (g.size() >= 2) out.push_back(std::move(g));
    for (int n = ex + 1; n <= opt.n_max; ++n) {
        const std::uint64_t s = mix_seed(opt.seed, 100 + static_cast<std::uint64_t>(n));
        std::vector<PortGraph> named = {oriented_ring(n), path_graph(n), star(n), clique(n)};
        for (auto& g : named) {
            out.push_back(relabel_ports(g, mix_seed(s, out.size())));
            out.push_back(std::move(g));
        }
        for (int k = 0; k < opt.random_per_size; ++k) {
            out.push_back(random_tree(n, mix_seed(s, 1000 + static_cast<std::uint64_t>(k))));
            // cycle through sparse to dense extra-edge densities
            static const int densities[] = {100, 250, 450, 700};
            const int permille = densities[k % 4];
            out.push_back(random_connected(n, mix_seed(s, 2000 + static_cast<std::uint64_t>(k)), permille));
        }
    }
    return out;
}

std::string corpus_hash(const std::vector<PortGraph>& corpus) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& g : corpus) {
        std::uint64_t f = g.fingerprint();
        for (int i = 0; i < 8; ++i) {
            h ^= (f >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- ESST driver -------------------------------------------------------------------

EsstRun run_esst_discrete(const PortGraph& g, NodeId start, const TokenSchedule& token, Esst::Variant variant,
                          const PolyTable& table, std::uint64_t seed, std::uint64_t step_cap) {
    enum class TokenAt { A, B, Inside };
    Rng rng(seed);
    TokenAt where = TokenAt::A;
    if (token.mode == TokenSchedule::Mode::Interior) where = TokenAt::Inside;
    if (token.mode == TokenSchedule::Mode::Shuttle) where = static_cast<TokenAt>(rng.below(3));
    const bool on_edge = token.a != token.b;
    const int token_edge = on_edge ? [&] {
        for (Port p = 0; p < g.degree(token.a); ++p)
            if (g.traverse(token.a, p).node == token.b) return g.edge_id(token.a, p);
        throw GraphError("token edge endpoints are not adjacent");
    }() : -1;

    Esst esst(variant, &table);
    EsstRun run;
    std::vector<char> seen(g.edge_count(), 0);
    int missing = g.edge_count();
    NodeId at = start;
    while (run.steps < step_cap) {
        const bool here = (where == TokenAt::A && at == token.a) || (where == TokenAt::B && at == token.b);
        const Esst::Action a = esst.next(g.degree(at), here, false);
        if (a.outcome == Esst::Outcome::Finished) {
            run.finished = true;
            break;
        }
        if (a.outcome == Esst::Outcome::TokenLost) break;
        const int e = g.edge_id(at, a.port);
        if (!seen[e]) {
            seen[e] = 1;
            --missing;
        }
        const PortTarget to = g.traverse(at, a.port);
        if (e == token_edge && where == TokenAt::Inside) esst.sighted_mid_edge(true, false);
        esst.arrived(to.entry, g.degree(to.node));
        at = to.node;
        ++run.steps;
        if (token.mode == TokenSchedule::Mode::Shuttle && on_edge &&
            rng.chance(static_cast<std::uint64_t>(token.move_permille), 1000)) {
            if (where == TokenAt::Inside)
                where = rng.chance(1, 2) ? TokenAt::A : TokenAt::B;
            else
                where = TokenAt::Inside;
        }
    }
    run.covered = missing == 0;
    run.phases = esst.phase_log();
    return run;
}

// ---- Meeting pairs -------------------------------------------------------------------

namespace {

// Runs the Meeting policy until the first contact, then stays put.
class MeetingOnly final : public AgentProgram {
public:
    MeetingOnly(const AgentSpec& spec, const PolyTable* table) : policy_(spec.label, table) {
        mem_ = std::make_shared<AgentMemory>();
        mem_->label = spec.label;
        mem_->speed = spec.speed;
    }
    void on_arrival(AgentContext&, Port entry, int) override { entry_ = entry; }
    bool on_meeting(AgentContext&, const std::vector<Peer>&) override {
        met_ = true;
        return true;
    }
    Decision decide(AgentContext& ctx, const NodeView& view) override {
        if (met_ || view.degree == 0) return Decision::forever();
        const MeetingAction a = policy_.next_action(view.degree, entry_);
        if (a.is_wait()) return Decision::wait_until(ctx.local_time() + a.duration);
        return Decision::move(a.port);
    }
    std::shared_ptr<const AgentMemory> snapshot() const override { return mem_; }

private:
    MeetingPolicy policy_;
    Port entry_ = 0;
    bool met_ = false;
    std::shared_ptr<AgentMemory> mem_;
};

class FirstMeet final : public TraceSink {
public:
    bool wants(EventKind k) const override { return k == EventKind::Meet; }
    void emit(const SimEvent& e) override {
        if (!time) time = e.time;
    }
    std::optional<Rational> time;
};

}  // namespace

MeetingRun run_meeting_pair(const PortGraph& g, const MeetingCase& c, const PolyTable& table, const Rational& horizon) {
    Scenario s;
    s.graph = std::make_shared<PortGraph>(g);
    AgentSpec a1;
    a1.label = c.l1;
    a1.speed = c.v1;
    a1.start = c.s1;
    a1.wake = c.w1;
    AgentSpec a2;
    a2.label = c.l2;
    a2.speed = c.v2;
    a2.start = c.s2;
    a2.wake = c.w2;
    if (c.crash2) {
        CrashSpec cs;
        cs.time = *c.crash2;
        cs.kind = FaultModel::Motion;
        a2.crash = cs;
    }
    s.agents = {a1, a2};
    s.horizon = horizon;

    const PolyTable* tp = &table;
    ProgramFactory f = [tp](const AgentSpec& spec, const Scenario&) -> std::unique_ptr<AgentProgram> {
        return std::make_unique<MeetingOnly>(spec, tp);
    };
    FirstMeet sink;
    RunOptions ro;
    const RunResult r = run(s, f, sink, ro);

    MeetingRun out;
    out.traversals = r.traversals;
    if (!sink.time) return out;
    out.met = true;
    out.time = *sink.time;
    // A dormant partner is woken by the visit, so the clock starts with agent 1.
    const Rational later = c.w2 ? std::max(c.w1, *c.w2) : c.w1;
    const Rational vmin = std::min(c.v1, c.v2);
    out.effort = vmin * (out.time - later);
    if (out.effort < 0) out.effort = 0;
    return out;
}

// ---- certification ----------------------------------------------------------------------

namespace {

void say(const CertifyOptions& opt, const std::string& s) {
    if (opt.log) opt.log(s);
}

BigInt ceil_rational(const Rational& q) {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Label label_of_length(Rng& rng, int len) {
    if (len <= 1) return 1;
    const Label hi = Label{1} << (len - 1);
    return hi | (rng.next() & (hi - 1));
}

struct EsstCase {
    const PortGraph* g;
    NodeId start;
    TokenSchedule token;
    std::uint64_t seed;
};

// Start nodes and token placements for one graph.
std::vector<EsstCase> esst_cases(const PortGraph& g, int runs, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<EsstCase> out;
    const int n = g.size();
    for (int k = 0; k < runs; ++k) {
        EsstCase c{&g, static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n))), {}, rng.next()};
        switch (k % 4) {
            case 0:  // static token at a random node
                c.token.a = c.token.b = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
                break;
            case 1:  // static token at the start node
                c.token.a = c.token.b = c.start;
                break;
            default: {  // crashed inside an edge, or moving along it
                const NodeId u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
                const PortTarget t = g.traverse(u, static_cast<Port>(rng.below(static_cast<std::uint64_t>(g.degree(u)))));
                c.token.a = u;
                c.token.b = t.node;
                c.token.mode = k % 4 == 2 ? TokenSchedule::Mode::Interior : TokenSchedule::Mode::Shuttle;
                break;
            }
        }
        out.push_back(c);
    }
    return out;
}

struct EsstMaxima {
    std::vector<std::uint64_t> total;                      // [n]
    std::map<std::pair<int, int>, std::uint64_t> phase;    // (n, phase)
};

// Runs every case in both variants; measures max(plain, ceil(modified / 2)).
// Returns a failure description for unfinished or non-covering runs.
std::optional<std::string> measure_esst(const std::vector<EsstCase>& cases, const PolyTable& table, EsstMaxima& mx) {
    for (const auto& c : cases) {
        const int n = c.g->size();
        for (auto v : {Esst::Variant::Plain, Esst::Variant::Modified}) {
            const EsstRun r = run_esst_discrete(*c.g, c.start, c.token, v, table, c.seed);
            if (!r.finished || !r.covered) {
                std::ostringstream os;
                os << "ESST " << (v == Esst::Variant::Plain ? "plain" : "modified") << (r.finished ? " missed edges" : " did not finish")
                   << " on graph fp=" << c.g->fingerprint() << " n=" << n << " start=" << c.start << " token=(" << c.token.a << ","
                   << c.token.b << ")";
                return os.str();
            }
            const std::uint64_t div = v == Esst::Variant::Plain ? 1 : 2;
            mx.total[n] = std::max(mx.total[n], (r.steps + div - 1) / div);
            for (const auto& [phase, steps] : r.phases) {
                auto& slot = mx.phase[{n, phase}];
                slot = std::max(slot, (steps + div - 1) / div);
            }
        }
    }
    return std::nullopt;
}

std::vector<EsstCase> all_esst_cases(const std::vector<PortGraph>& corpus, const CertifyOptions& opt, std::uint64_t seed) {
    std::vector<EsstCase> cases;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const PortGraph& g = corpus[i];
        const int runs = opt.esst_runs_per_graph > 0 ? opt.esst_runs_per_graph : 4 * g.size();
        auto cs = esst_cases(g, runs, mix_seed(seed, i));
        cases.insert(cases.end(), cs.begin(), cs.end());
    }
    return cases;
}

// Labels 2^len - 1 and 2^len at top speed with simultaneous wakeups, for
// every ordered pair of start nodes.
std::vector<MeetingCase> aligned_cases(const PortGraph& g, int len) {
    // Top speed, adjacent labels, every ordered start pair: simultaneous
    // wakes, each partner dormant, and small wake offsets in eighths.
    std::vector<MeetingCase> out;
    const Label top = (Label{1} << len) - 1;
    for (NodeId a = 0; a < g.size(); ++a)
        for (NodeId b = 0; b < g.size(); ++b) {
            if (a == b) continue;
            MeetingCase c;
            c.l1 = top;
            c.l2 = top + 1;
            c.v1 = c.v2 = kCertifiedSpeedMax;
            c.s1 = a;
            c.s2 = b;
            c.w1 = 0;
            for (int k = 0; k <= 8; ++k) {
                c.w2 = make_rational(k, 8);
                out.push_back(c);
            }
            c.w2 = std::nullopt;
            out.push_back(c);
            std::swap(c.l1, c.l2);
            out.push_back(c);
        }
    return out;
}

// Pairs whose shorter label has exactly `len` bits: the drift between the
// two wait schedules is smallest when the shorter label is large and the
// other one is its successor.
std::vector<MeetingCase> meeting_cases(const PortGraph& g, int len, int label_len_max, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<MeetingCase> out;
    const auto n = static_cast<std::uint64_t>(g.size());
    static const Rational speeds[] = {Rational(1), Rational(1, 8), Rational(8), Rational(3, 4), Rational(5, 2)};
    auto place = [&](MeetingCase& c) {
        c.s1 = static_cast<NodeId>(rng.below(n));
        do c.s2 = static_cast<NodeId>(rng.below(n));
        while (c.s2 == c.s1);
    };
    for (int k = 0; k < count; ++k) {
        MeetingCase c;
        c.l1 = label_of_length(rng, len);
        if (k % 2 == 0) {
            c.l2 = c.l1 + 1;
        } else {
            do c.l2 = label_of_length(rng, len + static_cast<int>(rng.below(static_cast<std::uint64_t>(label_len_max - len + 1))));
            while (c.l2 <= c.l1);
        }
        if (rng.chance(1, 2)) std::swap(c.l1, c.l2);
        c.v1 = speeds[rng.below(5)];
        c.v2 = speeds[rng.below(5)];
        place(c);
        c.w1 = make_rational(static_cast<long>(rng.below(17)), 8);
        switch (k % 4) {
            case 0: c.w2 = make_rational(static_cast<long>(rng.below(17)), 8); break;
            case 1: c.w2 = std::nullopt; break;  // dormant
            case 2:
                c.w2 = Rational(0);
                c.crash2 = make_rational(static_cast<long>(rng.below(40)) + 1, 3);
                break;
            default: c.w2 = c.w1; break;
        }
        out.push_back(c);
    }
    // The slowest pairs: equal speeds, (nearly) equal wakeups, so the
    // schedules start aligned and drift apart as slowly as possible. Waits
    // last the same time at any speed, so effort peaks at the top speed;
    // the aligned case is deterministic and covered for every start pair.
    const Label top = (Label{1} << len) - 1;
    const auto aligned = aligned_cases(g, len);
    out.insert(out.end(), aligned.begin(), aligned.end());
    for (int k = 0; k < std::max(2, count / 3); ++k) {
        MeetingCase c;
        c.l1 = top;
        c.l2 = top + 1;
        c.v1 = c.v2 = speeds[rng.below(5)];
        place(c);
        c.w1 = 0;
        c.w2 = k == 0 ? Rational(0) : make_rational(static_cast<long>(rng.below(9)), 8);
        out.push_back(c);
    }
    return out;
}

const Rational kMeetingHorizon = Rational(BigInt("1000000000000000000000000"));

std::string describe(const PortGraph& g, const MeetingCase& c) {
    std::ostringstream os;
    os << "graph fp=" << g.fingerprint() << " n=" << g.size() << " labels " << c.l1 << "," << c.l2 << " speeds "
       << to_string(c.v1) << "," << to_string(c.v2) << " starts " << c.s1 << "," << c.s2 << " wakes " << to_string(c.w1) << ","
       << (c.w2 ? to_string(*c.w2) : std::string("dormant"));
    if (c.crash2) os << " crash " << to_string(*c.crash2);
    return os.str();
}

// Graphs of each size used for meeting measurements: `count` spread evenly
// over the corpus order, plus the `hard` ones on which aligned neighbouring
// labels of a short length take longest to meet. Hardness comes in tiers
// tied to the graph's symmetry, and a short label length already exposes it.
std::vector<const PortGraph*> meeting_graphs(const std::vector<PortGraph>& corpus, int n, int count, int hard,
                                             const PolyTable& t) {
    std::vector<const PortGraph*> of_size;
    for (const auto& g : corpus)
        if (g.size() == n) of_size.push_back(&g);
    if (static_cast<int>(of_size.size()) <= count + hard) return of_size;
    std::vector<const PortGraph*> out;
    for (int k = 0; k < count; ++k) out.push_back(of_size[of_size.size() * static_cast<std::size_t>(k) / count]);

    const int len = std::min(5, t.label_len_max);
    std::vector<std::pair<Rational, std::size_t>> score;
    for (std::size_t i = 0; i < of_size.size(); ++i) {
        Rational worst = 0;
        for (const auto& c : aligned_cases(*of_size[i], len)) worst = std::max(worst, run_meeting_pair(*of_size[i], c, t, kMeetingHorizon).effort);
        score.emplace_back(worst, i);
    }
    std::stable_sort(score.begin(), score.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [effort, i] : score) {
        if (hard == 0) break;
        if (std::find(out.begin(), out.end(), of_size[i]) != out.end()) continue;
        out.push_back(of_size[i]);
        --hard;
    }
    return out;
}

}  // namespace

PolyTable certify(const std::vector<PortGraph>& corpus, const CertifyOptions& opt) {
    PolyTable t = PolyTable::empty(opt.n_max, opt.label_len_max);
    t.safety_factor = opt.safety_factor;
    t.corpus_hash = corpus_hash(corpus);
    t.policy = MeetingPolicy::kName;

    // 1. exploration sequences
    for (int n = 1; n <= opt.n_max; ++n) {
        UesSearch search;
        search.budget = opt.ues_budget;
        auto u = generate_ues(n, corpus, mix_seed(opt.seed, 10 + static_cast<std::uint64_t>(n)), search);
        if (!u) throw CertificationFailure("no exploration sequence for n=" + std::to_string(n) + " within budget");
        std::string witness;
        if (!verify_ues(corpus, *u, &witness)) throw CertificationFailure("sequence for n=" + std::to_string(n) + " fails: " + witness);
        t.ues[n] = std::move(*u);
        t.P_[n] = static_cast<unsigned long>(t.ues[n].terms.size());
        say(opt, "P(" + std::to_string(n) + ") = " + t.P_[n].get_str());
    }

    // 2. exploration with a token
    EsstMaxima mx;
    mx.total.assign(opt.n_max + 1, 0);
    const auto cases = all_esst_cases(corpus, opt, mix_seed(opt.seed, 20));
    say(opt, "ESST runs: " + std::to_string(cases.size() * 2));
    if (auto fail = measure_esst(cases, t, mx)) throw CertificationFailure(*fail);
    for (int n = 2; n <= opt.n_max; ++n) {
        t.rho_[n] = ceil_rational(opt.safety_factor * Rational(BigInt(static_cast<unsigned long>(mx.total[n]))));
        say(opt, "rho(" + std::to_string(n) + ") = " + t.rho_[n].get_str());
    }
    t.rho_[1] = t.rho_[2];
    // Per-phase maxima are noisy (late phases are rare), so every phase of a
    // size gets the largest phase measured there.
    std::map<int, std::uint64_t> phase_cap;
    for (const auto& [key, v] : mx.phase) phase_cap[key.first] = std::max(phase_cap[key.first], v);
    for (const auto& [key, v] : mx.phase)
        t.pi_[key] = ceil_rational(opt.safety_factor * Rational(BigInt(static_cast<unsigned long>(phase_cap[key.first]))));
    // n = 1 never runs an exploration; give it the n = 2 values
    for (const auto& [key, v] : std::map(t.pi_))
        if (key.first == 2) t.pi_[{1, key.second}] = v;

    // 3. rendezvous
    for (int n = 2; n <= opt.n_max; ++n) {
        const auto graphs = meeting_graphs(corpus, n, opt.meeting_graphs_per_size, opt.meeting_hard_graphs, t);
        Rational worst_n = -1;
        std::string worst_case;
        for (int len = 1; len <= opt.label_len_max; ++len) {
            Rational worst = 0;
            for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
                const auto cs = meeting_cases(*graphs[gi], len, opt.label_len_max, opt.meeting_cases_per_length,
                                              mix_seed(opt.seed, 1000000 + 1000 * static_cast<std::uint64_t>(n) + 50 * len + gi));
                for (const auto& c : cs) {
                    const MeetingRun r = run_meeting_pair(*graphs[gi], c, t, kMeetingHorizon);
                    if (!r.met) throw CertificationFailure("no meeting: " + describe(*graphs[gi], c));
                    if (r.effort > worst_n) {
                        worst_n = r.effort;
                        worst_case = describe(*graphs[gi], c);
                    }
                    worst = std::max(worst, r.effort);
                }
            }
            t.Pi_[n][len] = ceil_rational(opt.safety_factor * worst);
        }
        say(opt, "Pi(" + std::to_string(n) + ", " + std::to_string(opt.label_len_max) + ") = " + t.Pi_[n][opt.label_len_max].get_str() +
                     "; slowest: " + worst_case);
    }
    t.Pi_[1] = t.Pi_[2];
    t.enforce_monotone();
    return t;
}

std::optional<std::string> replay_certification(const std::vector<PortGraph>& corpus, const PolyTable& table,
                                                const CertifyOptions& opt) {
    for (int n = 1; n <= table.n_max; ++n) {
        std::string witness;
        if (!verify_ues(corpus, table.ues[n], &witness)) return "sequence for n=" + std::to_string(n) + ": " + witness;
        if (table.P(n) != static_cast<unsigned long>(table.ues[n].terms.size())) return "P(" + std::to_string(n) + ") mismatch";
    }

    // fresh seeds: these runs are not the ones the table was fitted to
    EsstMaxima mx;
    mx.total.assign(table.n_max + 1, 0);
    auto cases = all_esst_cases(corpus, opt, mix_seed(opt.seed ^ 0x5eedULL, 21));
    if (auto fail = measure_esst(cases, table, mx)) return fail;
    for (int n = 2; n <= table.n_max; ++n)
        if (table.rho(n) < static_cast<unsigned long>(mx.total[n]))
            return "rho(" + std::to_string(n) + ") = " + table.rho(n).get_str() + " < measured " + std::to_string(mx.total[n]);
    for (const auto& [key, v] : mx.phase)
        if (table.pi(key.first, key.second) < static_cast<unsigned long>(v))
            return "pi(" + std::to_string(key.first) + ", " + std::to_string(key.second) + ") < measured " + std::to_string(v);

    for (int n = 2; n <= table.n_max; ++n) {
        const auto graphs = meeting_graphs(corpus, n, opt.meeting_graphs_per_size, opt.meeting_hard_graphs, table);
        for (int len = 1; len <= table.label_len_max; ++len) {
            for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
                const auto cs = meeting_cases(*graphs[gi], len, table.label_len_max, opt.meeting_cases_per_length,
                                              mix_seed(opt.seed ^ 0x5eedULL, 1000000 + 1000 * static_cast<std::uint64_t>(n) + 50 * len + gi));
                for (const auto& c : cs) {
                    const MeetingRun r = run_meeting_pair(*graphs[gi], c, table, kMeetingHorizon);
                    if (!r.met) return "no meeting: " + describe(*graphs[gi], c);
                    if (Rational(table.Pi(n, len)) < r.effort)
                        return "Pi(" + std::to_string(n) + ", " + std::to_string(len) + ") exceeded: " + describe(*graphs[gi], c);
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace gather
