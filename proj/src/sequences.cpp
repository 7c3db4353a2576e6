#include "gather/sequences.hpp"

#include "gather/rng.hpp"

#include <algorithm>

namespace gather {

Route Route::from_steps(const std::vector<PortStep>& first_to_last) {
    Route r;
    for (auto it = first_to_last.rbegin(); it != first_to_last.rend(); ++it) r.prepend(*it);
    return r;
}

Trajectory follow(const PortGraph& g, NodeId start, const Ues& ues) {
    Trajectory t;
    t.start = start;
    NodeId at = start;
    UesWalker w(&ues);
    while (!w.done()) {
        const Port p = w.next_port(g.degree(at));
        const PortTarget to = g.traverse(at, p);
        t.steps.push_back({p, to.node, to.entry});
        w.advance(to.entry);
        at = to.node;
    }
    return t;
}

Trajectory reverse(const Trajectory& t) {
    Trajectory r;
    r.start = t.end();
    for (std::size_t k = t.steps.size(); k-- > 0;) {
        const NodeId before = k == 0 ? t.start : t.steps[k - 1].node;
        r.steps.push_back({t.steps[k].entry, before, t.steps[k].exit});
    }
    return r;
}

bool covers_all_edges(const PortGraph& g, const Trajectory& t) {
    std::vector<char> seen(g.edge_count(), 0);
    int count = 0;
    NodeId at = t.start;
    for (const auto& s : t.steps) {
        const int e = g.edge_id(at, s.exit);
        if (!seen[e]) {
            seen[e] = 1;
            ++count;
        }
        at = s.node;
    }
    return count == g.edge_count();
}

bool verify_ues(const std::vector<PortGraph>& corpus, const Ues& ues, std::string* witness) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const PortGraph& g = corpus[i];
        if (g.size() > ues.size || g.size() < 2) continue;
        for (NodeId v = 0; v < g.size(); ++v) {
            if (!covers_all_edges(g, follow(g, v, ues))) {
                if (witness) *witness = "graph " + std::to_string(i) + " start " + std::to_string(v);
                return false;
            }
        }
    }
    return true;
}

namespace {

struct Walk {
    const PortGraph* g;
    NodeId at;
    Port entry = 0;
    std::vector<char> seen;
    int missing;
};

}  // namespace

std::optional<Ues> generate_ues(int size, const std::vector<PortGraph>& corpus, std::uint64_t seed,
                                const UesSearch& search, const Ues* prefix) {
    Ues out;
    out.size = size;
    if (prefix) out.terms = prefix->terms;
    std::vector<Walk> walks;
    int max_deg = 1;
    for (const auto& g : corpus) {
        if (g.size() > size || g.size() < 2) continue;
        max_deg = std::max(max_deg, g.max_degree());
        for (NodeId v = 0; v < g.size(); ++v) walks.push_back({&g, v, 0, std::vector<char>(g.edge_count(), 0), g.edge_count()});
    }
    auto step = [](Walk& w, int term) {
        const int d = w.g->degree(w.at);
        const Port p = static_cast<Port>((w.entry + term) % d);
        const int e = w.g->edge_id(w.at, p);
        if (!w.seen[e]) {
            w.seen[e] = 1;
            --w.missing;
        }
        const PortTarget t = w.g->traverse(w.at, p);
        w.at = t.node;
        w.entry = t.entry;
    };
    for (int term : out.terms)
        for (auto& w : walks) step(w, term);

    std::vector<Walk*> open;
    for (auto& w : walks)
        if (w.missing > 0) open.push_back(&w);
    Rng rng(seed);
    // Range of terms that matter: residues modulo every degree up to max_deg.
    const int span = std::max(2, max_deg);
    while (!open.empty()) {
        if (out.terms.size() >= search.budget) return std::nullopt;
        // Term 0 is always a candidate and wins ties, so trivial corpora give [0].
        int best_term = 0;
        long best_gain = -1;
        for (int c = 0; c < search.candidates; ++c) {
            const int term = c == 0 ? 0 : static_cast<int>(rng.below(span));
            long gain = 0;
            for (Walk* w : open) {
                const int d = w->g->degree(w->at);
                const Port p = static_cast<Port>((w->entry + term) % d);
                if (!w->seen[w->g->edge_id(w->at, p)]) ++gain;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best_term = term;
            }
        }
        // Term 0 walks straight back, so with nothing to gain it would bounce
        // on one edge forever; move on randomly instead.
        if (best_gain == 0) best_term = 1 + static_cast<int>(rng.below(span - 1));
        out.terms.push_back(best_term);
        for (Walk* w : open) step(*w, best_term);
        open.erase(std::remove_if(open.begin(), open.end(), [](Walk* w) { return w->missing == 0; }), open.end());
    }
    if (out.terms.empty()) out.terms.push_back(0);
    return out;
}

}  // namespace gather
