#include "gather/harness.hpp"

#include "gather/bounds.hpp"
#include "gather/certify.hpp"
#include "gather/protocols.hpp"
#include "gather/rng.hpp"
#include "gather/sequences.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace gather {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "PASS";
        case Outcome::Fail: return "FAIL";
        case Outcome::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

int exit_code(Outcome o) {
    switch (o) {
        case Outcome::Pass: return 0;
        case Outcome::Fail: return 1;
        case Outcome::Indeterminate: return 2;
    }
    return 2;
}

double BoundCheck::ratio() const {
    if (!applicable || sgn(bound) <= 0) return 0.0;
    return to_double(observed / bound);
}

namespace {

int severity(Outcome o) {
    return o == Outcome::Fail ? 2 : o == Outcome::Indeterminate ? 1 : 0;
}

void append_detail(std::string& to, const std::string& what) {
    if (what.empty()) return;
    if (!to.empty()) to += "; ";
    to += what;
}

}  // namespace

void Verdict::fail(const std::string& property, std::size_t witness, const std::string& why) {
    outcome = Outcome::Fail;
    if (std::find(violated.begin(), violated.end(), property) == violated.end()) violated.push_back(property);
    witnesses.push_back(witness);
    append_detail(detail, property + ": " + why);
}

void Verdict::merge(const Verdict& o) {
    if (severity(o.outcome) > severity(outcome)) outcome = o.outcome;
    for (const auto& v : o.violated)
        if (std::find(violated.begin(), violated.end(), v) == violated.end()) violated.push_back(v);
    witnesses.insert(witnesses.end(), o.witnesses.begin(), o.witnesses.end());
    std::sort(witnesses.begin(), witnesses.end());
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
    append_detail(detail, o.detail);
    if (!gathering_time) gathering_time = o.gathering_time;
    if (good.empty()) good = o.good;
    if (sigma.empty()) sigma = o.sigma;
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
}

// ---- trace helpers ------------------------------------------------------------

namespace {

std::vector<Label> parse_labels(const std::string& csv) {
    std::vector<Label> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

std::string join(const std::vector<Label>& ls) {
    std::string s;
    for (Label l : ls) s += (s.empty() ? "" : ",") + std::to_string(l);
    return s;
}

// Agents of the scenario with no crash event in the trace.
std::vector<Label> good_agents(const Trace& t, const Scenario& s) {
    std::set<Label> crashed;
    for (const auto& e : t.events)
        if (e.kind == EventKind::Crash) crashed.insert(e.agent);
    std::vector<Label> out;
    for (const auto& a : s.agents)
        if (!crashed.count(a.label)) out.push_back(a.label);
    std::sort(out.begin(), out.end());
    return out;
}

// Wakeup time of the earliest woken good agent.
std::optional<Rational> first_good_wake(const Trace& t, const std::vector<Label>& good) {
    const std::set<Label> g(good.begin(), good.end());
    for (const auto& e : t.events)
        if (e.kind == EventKind::Wakeup && g.count(e.agent)) return e.time;
    return std::nullopt;
}

// Where every agent is, replayed from depart / arrive / crash events.
class Positions {
public:
    explicit Positions(const Scenario& s) : g_(s.graph.get()) {
        for (const auto& a : s.agents) {
            State st;
            st.node = a.start;
            st.speed = a.speed;
            by_label_[a.label] = st;
        }
    }

    void apply(const SimEvent& e) {
        auto it = by_label_.find(e.agent);
        if (it == by_label_.end()) return;
        State& st = it->second;
        switch (e.kind) {
            case EventKind::Depart: {
                const std::string* port = e.field("port");
                if (!port || !e.where || !e.where->at_node()) return;
                st.node = e.where->node;
                st.to = g_->traverse(st.node, std::stoi(*port)).node;
                st.depart = e.time;
                st.moving = true;
                break;
            }
            case EventKind::Arrive:
                if (e.where && e.where->at_node()) st.node = e.where->node;
                st.moving = false;
                break;
            case EventKind::Crash:
                st.moving = false;
                st.frozen = e.where;
                break;
            default: break;
        }
    }

    Location at(Label l, const Rational& t) const {
        const State& st = by_label_.at(l);
        if (st.frozen) return *st.frozen;
        if (!st.moving || t <= st.depart) return Location::of_node(st.node);
        const Rational off = (t - st.depart) * st.speed;
        if (off >= 1) return Location::of_node(st.to);
        return Location::on_edge(st.node, st.to, off);
    }

private:
    struct State {
        NodeId node = 0, to = 0;
        bool moving = false;
        Rational depart, speed;
        std::optional<Location> frozen;
    };
    const PortGraph* g_;
    std::map<Label, State> by_label_;
};

std::string role_of(const std::string& state) { return state.substr(0, state.find('/')); }
std::string phase_of(const std::string& state) {
    const auto slash = state.find('/');
    return slash == std::string::npos ? std::string() : state.substr(slash + 1);
}

bool allowed_transition(FaultModel f, const std::string& from, const std::string& to) {
    const std::string a = role_of(from), b = role_of(to);
    const bool motion = f == FaultModel::Motion;
    if (a == "gatherer" && b == "gatherer") {
        static const std::vector<std::string> order{"rstar", "red", "travel", "final"};
        const auto i = std::find(order.begin(), order.end(), phase_of(from));
        const auto j = std::find(order.begin(), order.end(), phase_of(to));
        return i != order.end() && j == i + 1;
    }
    if (b == "gatherer") return phase_of(to) == "rstar" && a != "finder" && a != "gatherer";
    if (a == "cruiser") return b == "token" || b == "explorer" || (motion && b == "finder");
    if (a == "token") return motion ? b == "finder" : b == "cruiser";
    if (a == "explorer") return !motion && b == "cruiser";
    if (a == "finder") return motion && b == "recycled-explorer";
    return false;
}

}  // namespace

// ---- gathering predicate -------------------------------------------------------

Verdict check_gathering(const Trace& trace, const Scenario& s) {
    Verdict v;
    v.good = good_agents(trace, s);
    if (trace.truncated()) {
        v.outcome = Outcome::Indeterminate;
        v.detail = "trace truncated before completion";
        return v;
    }
    const std::size_t last = trace.events.empty() ? 0 : trace.events.size() - 1;

    Positions pos(s);
    std::set<Label> declared;
    std::optional<std::size_t> first_declare;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const SimEvent& e = trace.events[i];
        if (e.kind != EventKind::Declare) {
            pos.apply(e);
            continue;
        }
        if (!e.where || !e.where->at_node()) {
            v.fail("gathering.c", i, "declaration without a node");
            continue;
        }
        const Location here = *e.where;
        if (!first_declare) {
            first_declare = i;
            // (d) nobody may declare before all good agents are together
            std::optional<Location> common;
            for (Label g : v.good) {
                const Location at = pos.at(g, e.time);
                if (!common) {
                    common = at;
                } else if (!(at == *common)) {
                    v.fail("gathering.d", i, "declaration at " + to_string(e.time) + " before good agents were co-located");
                    break;
                }
            }
            v.gathering_time = e.time;
        } else {
            const SimEvent& f = trace.events[*first_declare];
            if (e.time != f.time || !(here == *f.where))
                v.fail("gathering.c", i, "declarations at " + f.where->str() + " t=" + to_string(f.time) + " and " +
                                             here.str() + " t=" + to_string(e.time));
        }
        // (b) every good agent occupies the declaring node
        for (Label g : v.good) {
            const Location at = pos.at(g, e.time);
            if (!(at == here)) {
                v.fail("gathering.b", i, "good agent " + std::to_string(g) + " at " + at.str() + " while declaring at " +
                                             here.str());
                break;
            }
        }
        for (Label l : e.agents) declared.insert(l);
    }
    // (a) every good agent declares
    for (Label g : v.good)
        if (!declared.count(g)) {
            v.fail("gathering.a", last, "good agent " + std::to_string(g) + " never declared");
            break;
        }
    if (v.gathering_time) {
        if (auto t0 = first_good_wake(trace, v.good)) *v.gathering_time -= *t0;
    }
    std::sort(v.witnesses.begin(), v.witnesses.end());
    return v;
}

// ---- protocol invariants ------------------------------------------------------------

Verdict check_protocol(const Trace& trace, const Scenario& s) {
    Verdict v;
    v.good = good_agents(trace, s);
    const std::set<Label> good(v.good.begin(), v.good.end());
    std::map<Label, std::string> state;
    for (const auto& a : s.agents) state[a.label] = "cruiser";

    std::optional<Label> target;
    std::optional<std::vector<Label>> sigma;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const SimEvent& e = trace.events[i];
        if (e.kind == EventKind::Transition) {
            const std::string* from = e.field("from");
            const std::string* to = e.field("to");
            if (!from || !to || !state.count(e.agent)) {
                v.fail("state-graph", i, "malformed transition");
                continue;
            }
            if (*from != state[e.agent])
                v.fail("state-graph", i, "agent " + std::to_string(e.agent) + " left " + *from + " while in " +
                                             state[e.agent]);
            if (!allowed_transition(s.protocol, *from, *to))
                v.fail("state-graph", i, "agent " + std::to_string(e.agent) + ": " + *from + " -> " + *to);
            state[e.agent] = *to;
            if (*to == "gatherer/travel" && good.count(e.agent)) {
                const std::string* t = e.field("target");
                const std::string* sg = e.field("sigma");
                if (t) {
                    const Label tl = std::stoull(*t);
                    if (!target) {
                        target = tl;
                    } else if (*target != tl) {
                        v.fail("target-agreement", i, "targets " + std::to_string(*target) + " and " + *t);
                    }
                }
                if (s.protocol == FaultModel::Total && sg) {
                    std::vector<Label> bag = parse_labels(*sg);
                    std::sort(bag.begin(), bag.end());
                    if (!sigma) {
                        sigma = bag;
                    } else if (*sigma != bag) {
                        v.fail("bag-convergence", i, "bags {" + join(*sigma) + "} and {" + *sg + "}");
                    }
                }
            }
        } else if (e.kind == EventKind::Declare) {
            for (Label l : e.agents)
                if (state.count(l) && state[l] != "gatherer/final")
                    v.fail("declare-state", i, "agent " + std::to_string(l) + " declared in state " + state[l]);
        }
    }
    if (sigma) {
        v.sigma = *sigma;
        for (Label g : v.good)
            if (!std::binary_search(sigma->begin(), sigma->end(), g))
                v.fail("bag-convergence", trace.events.empty() ? 0 : trace.events.size() - 1,
                       "good agent " + std::to_string(g) + " missing from the common bag");
    }
    std::sort(v.witnesses.begin(), v.witnesses.end());
    return v;
}

// ---- bounds -----------------------------------------------------------------------

std::optional<std::string> outside_certification(const Scenario& s, const PolyTable& table) {
    const PortGraph& g = *s.graph;
    if (g.size() > table.n_max)
        return "graph has " + std::to_string(g.size()) + " nodes, table covers " + std::to_string(table.n_max);
    for (const auto& a : s.agents)
        if (label_length(a.label) > table.label_len_max)
            return "label " + std::to_string(a.label) + " longer than " + std::to_string(table.label_len_max) + " bits";
    for (const auto& a : s.agents)
        if (a.speed < kCertifiedSpeedMin || a.speed > kCertifiedSpeedMax)
            return "speed " + to_string(a.speed) + " of agent " + std::to_string(a.label) + " outside [1/8, 8]";
    const Ues& u = table.ues_for(g.size());
    for (NodeId v = 0; v < g.size(); ++v)
        if (!covers_all_edges(g, follow(g, v, u)))
            return "graph not explored by the table's sequence from node " + std::to_string(v);
    return std::nullopt;
}

Verdict check_bounds(const Trace& trace, const Scenario& s, const PolyTable& table) {
    Verdict v;
    v.good = good_agents(trace, s);
    if (auto why = outside_certification(s, table)) {
        v.outcome = Outcome::Indeterminate;
        v.detail = "bounds not certified: " + *why;
        return v;
    }
    const auto t0 = first_good_wake(trace, v.good);
    if (!t0) return v;  // no good agent ever woke; nothing to measure

    const ScenarioStats st = scenario_stats(s);
    const BigInt n = s.graph->size();
    const int lambda = st.lambda;
    const std::set<Label> good(v.good.begin(), v.good.end());

    std::optional<std::pair<std::size_t, Rational>> first_meet, first_gatherer, first_good_gatherer, last_declare;
    BigInt mu = 0;
    Rational delta_star = st.epsilon;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const SimEvent& e = trace.events[i];
        if (e.kind == EventKind::Meet && !first_meet) first_meet = {{i, e.time}};
        if (e.kind == EventKind::Declare) last_declare = {{i, e.time}};
        if (e.kind != EventKind::Transition) continue;
        const std::string* to = e.field("to");
        if (!to) continue;
        if (*to == "gatherer/rstar") {
            if (!first_gatherer) first_gatherer = {{i, e.time}};
            if (!first_good_gatherer && good.count(e.agent)) first_good_gatherer = {{i, e.time}};
            if (const std::string* m = e.field("m")) mu = std::max(mu, parse_bigint(*m));
        } else if (*to == "gatherer/red") {
            if (const std::string* d = e.field("delta")) delta_star = std::min(delta_star, parse_rational(*d));
        }
    }

    auto check = [&](const std::string& id, const std::optional<std::pair<std::size_t, Rational>>& ev,
                     const Rational& bound, const std::string& missing) {
        BoundCheck c;
        c.id = id;
        c.bound = bound;
        if (!ev) {
            c.note = missing;
        } else {
            c.applicable = true;
            c.observed = ev->second > *t0 ? ev->second - *t0 : Rational(0);
            if (c.exceeded())
                v.fail(id, ev->first, "observed " + to_string(c.observed) + " > bound " + to_string(c.bound));
        }
        v.checks.push_back(c);
    };

    const Rational eps = st.epsilon;
    check("first-meet", first_meet, bounds::first_meeting_bound(table, n, lambda, eps), "no meeting");
    if (s.protocol == FaultModel::Motion) {
        const Rational l32 = Rational(6 * table.rho(n) + 2 * table.sum_P(n) + 2 * table.Pi(n, lambda)) / eps;
        check("first-gatherer", first_gatherer, l32, "no gatherer");
        if (mu == 0) mu = 2 * table.rho(n);
        const BigInt nu_star = bounds::nu_motion(table, mu);
        const Rational phi = bounds::phi_motion(table, nu_star, lambda, delta_star);
        check("declare-motion", last_declare, bounds::declare_bound_motion(phi, st.kappa, eps), "no declaration");
    } else {
        check("first-gatherer-total", first_good_gatherer, bounds::first_gatherer_bound_total(table, n, lambda, eps),
              "no good gatherer");
        if (mu == 0) mu = 2 * table.rho(n);
        const BigInt nu_star = bounds::nu_total(table, mu);
        const Rational psi = bounds::psi_total(table, nu_star, lambda, delta_star);
        check("declare-total", last_declare, bounds::declare_bound_total(psi, st.kappa, delta_star), "no declaration");
    }
    std::sort(v.witnesses.begin(), v.witnesses.end());
    return v;
}

Verdict check_all(const Trace& trace, const Scenario& s, const PolyTable& table) {
    Verdict v = check_gathering(trace, s);
    if (trace.truncated()) return v;
    v.merge(check_protocol(trace, s));
    v.merge(check_bounds(trace, s, table));
    return v;
}

// ---- horizon ----------------------------------------------------------------------

Rational declare_bound_apriori(const Scenario& s, const PolyTable& table) {
    const ScenarioStats st = scenario_stats(s);
    const PortGraph& g = *s.graph;
    const BigInt n = g.size();
    const int lambda = std::min(st.lambda, table.label_len_max);
    const BigInt top = table.n_max;
    // A gatherer's delta is at least its speed over the length of its R* walk.
    const BigInt c_max = (table.P(top) + 1) * 8 * g.edge_count() + table.P(top);
    const Rational delta_lb = st.epsilon / Rational(c_max);

    Rational latest_wake = 0;
    for (const auto& a : s.agents)
        if (a.wake) latest_wake = std::max(latest_wake, *a.wake);
    const Rational wake_slack = latest_wake + bounds::first_meeting_bound(table, n, lambda, st.epsilon);

    if (s.protocol == FaultModel::Motion) {
        const BigInt nu = bounds::nu_motion(table, top);
        const Rational phi = bounds::phi_motion(table, nu, lambda, delta_lb);
        return wake_slack + bounds::declare_bound_motion(phi, st.kappa, st.epsilon);
    }
    const BigInt nu = bounds::nu_total(table, top);
    const Rational psi = bounds::psi_total(table, nu, lambda, delta_lb);
    return wake_slack + bounds::first_gatherer_bound_total(table, n, lambda, st.epsilon) +
           bounds::declare_bound_total(psi, st.kappa, delta_lb);
}

Rational default_horizon(const Scenario& s, const PolyTable& table) { return 4 * declare_bound_apriori(s, table); }

// ---- running ----------------------------------------------------------------------

std::string scenario_hash(const Scenario& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : write_scenario(s)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::pair<std::string, std::string>> provenance(const Scenario& s, const PolyTable& table,
                                                            std::uint64_t seed) {
    return {{"scenario", scenario_hash(s)}, {"table", table.fingerprint()}, {"seed", std::to_string(seed)}};
}

RunReport run_and_check(const Scenario& s, const PolyTable& table, std::uint64_t seed) {
    RunReport r;
    VectorSink sink;
    RunOptions opt;
    opt.horizon = s.horizon ? *s.horizon : default_horizon(s, table);
    opt.provenance = provenance(s, table, seed);
    r.trace.header = opt.provenance;
    r.result = run(s, gathering_factory(&table), sink, opt);
    r.trace.events = std::move(sink.events);
    r.verdict = check_all(r.trace, s, table);
    return r;
}

// ---- impossibility demonstration -------------------------------------------------

namespace {

// Watches one agent's states and all declarations without storing the trace.
class DemoSink : public TraceSink {
public:
    explicit DemoSink(Label watched) : watched_(watched) {}
    bool wants(EventKind k) const override {
        return k == EventKind::Transition || k == EventKind::Declare || k == EventKind::End;
    }
    void emit(const SimEvent& e) override {
        if (e.kind == EventKind::Declare) declared = true;
        if (e.kind == EventKind::Transition && e.agent == watched_ && !left_cruiser) {
            left_cruiser = true;
            left_at = e.time;
        }
        if (e.kind == EventKind::End) end = e.time;
    }
    bool declared = false, left_cruiser = false;
    Rational left_at, end;

private:
    Label watched_;
};

DemoCase run_demo(const std::string& name, int k, int t1, int t2, const PolyTable& table) {
    DemoCase d;
    d.name = name;
    d.two_good = lower_bound_ring(k, t1, t2, 2);
    d.one_good = lower_bound_ring(k, t1, t2, 1);

    RunReport two = run_and_check(d.two_good, table);
    Verdict v = check_gathering(two.trace, d.two_good);
    v.merge(check_protocol(two.trace, d.two_good));
    d.two_good_outcome = v.outcome;
    d.two_good_time = v.gathering_time.value_or(Rational(0));
    d.horizon = 10 * d.two_good_time;
    if (sgn(d.horizon) <= 0) d.horizon = default_horizon(d.one_good, table);

    DemoSink sink(1);
    RunOptions opt;
    opt.horizon = d.horizon;
    run(d.one_good, gathering_factory(&table), sink, opt);
    d.one_good_declared = sink.declared;
    d.one_good_left_cruiser = sink.left_cruiser;
    d.cruiser_duration = sink.left_cruiser ? sink.left_at : sink.end;
    return d;
}

}  // namespace

std::vector<DemoCase> demo_impossibility(const PolyTable& table, int t1, int t2) {
    std::vector<DemoCase> out;
    out.push_back(run_demo("ring-4", 1, t1, t2, table));
    out.push_back(run_demo("ring-" + std::to_string(4 * (t1 + t2)), 2, t1, t2, table));
    return out;
}

// ---- sweeps ------------------------------------------------------------------------

Outcome SweepReport::overall() const {
    if (fail > 0) return Outcome::Fail;
    if (indeterminate > 0) return Outcome::Indeterminate;
    return Outcome::Pass;
}

namespace {

// The certification corpus grouped by size; built once per table size.
const std::vector<std::vector<PortGraph>>& corpus_by_size(int n_max) {
    static std::map<int, std::vector<std::vector<PortGraph>>> cache;
    auto it = cache.find(n_max);
    if (it != cache.end()) return it->second;
    CorpusOptions opt;
    opt.n_max = n_max;
    std::vector<std::vector<PortGraph>> by(n_max + 1);
    for (auto& g : build_corpus(opt)) by[g.size()].push_back(std::move(g));
    return cache.emplace(n_max, std::move(by)).first->second;
}

}  // namespace

Scenario sweep_scenario(const SweepConfig& cfg, const PolyTable& table, std::uint64_t seed, int index) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(index)));
    std::shared_ptr<const PortGraph> g;
    if (!cfg.graphs.empty()) {
        g = std::make_shared<PortGraph>(cfg.graphs[rng.below(cfg.graphs.size())]);
    } else {
        const int hi = cfg.n_max > 0 ? cfg.n_max : table.n_max;
        const auto& by = corpus_by_size(table.n_max);
        std::vector<int> sizes;
        for (int n = std::max(cfg.n_min, 2); n <= std::min(hi, table.n_max); ++n)
            if (!by[n].empty()) sizes.push_back(n);
        if (sizes.empty()) throw std::invalid_argument("no corpus graph in the requested size range");
        const auto& pool = by[sizes[rng.below(sizes.size())]];
        g = std::make_shared<PortGraph>(pool[rng.below(pool.size())]);
    }
    GenConfig gen;
    gen.protocol = cfg.protocol;
    gen.k_min = cfg.k_min;
    gen.k_max = cfg.k_max;
    gen.label_max = cfg.label_max;
    gen.crash_permille = cfg.crash_permille;
    gen.min_good = cfg.min_good > 0 ? cfg.min_good : (cfg.protocol == FaultModel::Motion ? 1 : 2);
    return gen_random(g, gen, rng.next());
}

SweepReport sweep(const SweepConfig& cfg, const PolyTable& table, std::uint64_t seed) {
    SweepReport rep;
    for (int i = 0; i < cfg.scenarios; ++i) {
        SweepRow row;
        row.id = i;
        row.protocol = cfg.protocol;
        try {
            const Scenario s = sweep_scenario(cfg, table, seed, i);
            row.n = s.graph->size();
            row.k = static_cast<int>(s.agents.size());
            for (const auto& a : s.agents) row.crashes += a.crash ? 1 : 0;
            RunReport r = run_and_check(s, table, seed);
            row.outcome = r.verdict.outcome;
            row.gathering_time = r.verdict.gathering_time;
            row.checks = r.verdict.checks;
            row.detail = r.verdict.detail;
            row.events = r.trace.events.size();
        } catch (const std::exception& ex) {
            row.outcome = Outcome::Fail;
            row.detail = std::string("error: ") + ex.what();
        }
        switch (row.outcome) {
            case Outcome::Pass: ++rep.pass; break;
            case Outcome::Fail: ++rep.fail; break;
            case Outcome::Indeterminate: ++rep.indeterminate; break;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

namespace {

const std::vector<std::string> kBoundColumns{"first-meet", "first-gatherer", "declare-motion", "first-gatherer-total", "declare-total"};

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

}  // namespace

std::string sweep_csv(const SweepReport& r) {
    std::string out = "id,n,k,crashes,faults,outcome,gathering_time";
    for (const auto& c : kBoundColumns) out += "," + c + "_ratio";
    out += ",events,detail\n";
    for (const auto& row : r.rows) {
        out += std::to_string(row.id) + "," + std::to_string(row.n) + "," + std::to_string(row.k) + "," +
               std::to_string(row.crashes) + "," + fault_name(row.protocol) + "," + outcome_name(row.outcome) + ",";
        if (row.gathering_time) out += fmt_double(to_double(*row.gathering_time));
        for (const auto& col : kBoundColumns) {
            out += ",";
            for (const auto& l : row.checks)
                if (l.id == col && l.applicable) out += fmt_double(l.ratio());
        }
        out += "," + std::to_string(row.events) + "," + csv_field(row.detail) + "\n";
    }
    return out;
}

std::string sweep_text(const SweepReport& r) {
    std::ostringstream os;
    std::map<std::string, std::pair<double, int>> worst;  // bound id -> (max ratio, exceedances)
    for (const auto& row : r.rows)
        for (const auto& l : row.checks) {
            if (!l.applicable) continue;
            auto& w = worst[l.id];
            w.first = std::max(w.first, l.ratio());
            w.second += l.exceeded() ? 1 : 0;
        }
    os << "scenarios " << r.rows.size() << ": " << r.pass << " pass, " << r.fail << " fail, " << r.indeterminate
       << " indeterminate\n";
    for (const auto& [id, w] : worst)
        os << "  " << id << ": max observed/bound " << fmt_double(w.first) << ", exceedances " << w.second << "\n";
    for (const auto& row : r.rows)
        if (row.outcome != Outcome::Pass)
            os << "  #" << row.id << " n=" << row.n << " k=" << row.k << " " << outcome_name(row.outcome) << ": "
               << row.detail << "\n";
    os << "overall " << outcome_name(r.overall()) << "\n";
    return os.str();
}

}  // namespace gather
