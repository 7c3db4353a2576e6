#include "gather/scenario.hpp"

#include "gather/rng.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace gather {

const char* fault_name(FaultModel f) { return f == FaultModel::Motion ? "motion" : "total"; }

FaultModel parse_fault(const std::string& s) {
    if (s == "motion") return FaultModel::Motion;
    if (s == "total") return FaultModel::Total;
    throw std::invalid_argument("unknown fault model '" + s + "' (expected motion|total)");
}

const AgentSpec* Scenario::find(Label l) const {
    for (const auto& a : agents)
        if (a.label == l) return &a;
    return nullptr;
}

bool Scenario::is_good(Label l) const {
    const AgentSpec* a = find(l);
    return a && !a->crash;
}

std::vector<ValidationIssue> validate(const Scenario& s) {
    std::vector<ValidationIssue> out;
    auto issue = [&](const char* code, std::string detail) { out.push_back({code, std::move(detail)}); };
    if (!s.graph) {
        issue("no-graph", "scenario has no graph");
        return out;
    }
    if (s.agents.size() < 2) issue("too-few-agents", "need at least two agents, have " + std::to_string(s.agents.size()));
    std::set<Label> labels;
    std::set<NodeId> starts;
    bool any_wake = false;
    for (const auto& a : s.agents) {
        const std::string who = "agent " + std::to_string(a.label);
        if (a.label == 0) issue("bad-label", "labels must be positive integers");
        if (!labels.insert(a.label).second) issue("duplicate-label", who + " appears twice");
        if (a.start < 0 || a.start >= s.graph->size()) {
            issue("bad-start", who + " starts at missing node " + std::to_string(a.start));
        } else if (!starts.insert(a.start).second) {
            issue("shared-start", who + " shares start node " + std::to_string(a.start));
        }
        if (a.speed <= 0) issue("bad-speed", who + " has non-positive speed " + to_string(a.speed));
        if (a.wake) {
            any_wake = true;
            if (*a.wake < 0) issue("bad-wake", who + " wakes at negative time");
        }
        if (a.crash) {
            const auto& c = *a.crash;
            if (c.when == CrashSpec::When::At && c.time < 0) issue("bad-crash", who + " crashes at negative time");
            if (c.when != CrashSpec::When::At && c.delay <= 0) issue("bad-crash", who + " has a non-positive trigger delay");
            if (c.kind != s.protocol)
                issue("fault-mismatch", who + " has a " + fault_name(c.kind) + " fault under the " +
                                            fault_name(s.protocol) + " protocol");
        }
    }
    if (!any_wake) issue("no-wakeup", "no agent is woken by the adversary");
    if (s.horizon && *s.horizon <= 0) issue("bad-horizon", "horizon must be positive");
    int good = 0;
    for (const auto& a : s.agents)
        if (!a.crash) ++good;
    if (s.protocol == FaultModel::Motion && good < 1) issue("no-good-agent", "every agent is scheduled to crash");
    if (s.protocol == FaultModel::Total && good < 2) {
        issue("impossibility-regime", "total faults with " + std::to_string(good) + " never-crashing agent(s): gathering cannot be guaranteed");
        out.back().warning = true;
    }
    return out;
}

bool accepted(const std::vector<ValidationIssue>& issues) {
    return std::all_of(issues.begin(), issues.end(), [](const ValidationIssue& i) { return i.warning; });
}

ScenarioStats scenario_stats(const Scenario& s) {
    ScenarioStats st;
    bool first = true;
    for (const auto& a : s.agents) {
        if (first || a.speed < st.epsilon) st.epsilon = a.speed;
        if (first || a.speed > st.kappa) st.kappa = a.speed;
        st.lambda = std::max(st.lambda, bit_length(a.label));
        if (!a.crash) ++st.good;
        first = false;
    }
    if (st.epsilon > 0) st.r = st.kappa / st.epsilon;
    return st;
}

// ---- generation ---------------------------------------------------------------

namespace {

Rational random_fraction(Rng& rng, const Rational& lo, const Rational& hi, long den) {
    // uniform on the grid lo + k/den within [lo, hi]
    const Rational span = (hi - lo) * den;
    const long steps = floor_of(span).get_si();
    return lo + make_rational(static_cast<long>(rng.below(static_cast<std::uint64_t>(steps) + 1)), den);
}

Rational random_time(Rng& rng, const Rational& lo, const Rational& hi) {
    // odd 1/4096 grid keeps times away from integer (node) instants
    return random_fraction(rng, lo, hi, 4096);
}

}  // namespace

Scenario gen_random(std::shared_ptr<const PortGraph> g, const GenConfig& cfg, std::uint64_t seed) {
    const int n = g->size();
    if (cfg.k_min < 2 || cfg.k_max < cfg.k_min) throw UnsatisfiableConfig("agent count range is empty or below 2");
    if (cfg.k_min > n) throw UnsatisfiableConfig("graph has " + std::to_string(n) + " nodes, fewer than k_min agents");
    if (cfg.min_good > std::min(cfg.k_max, n)) throw UnsatisfiableConfig("more good agents required than agents fit");
    if (cfg.label_max < static_cast<Label>(cfg.k_max)) throw UnsatisfiableConfig("label range too small");
    if (cfg.speed_min <= 0 || cfg.speed_max < cfg.speed_min) throw UnsatisfiableConfig("empty speed range");

    Rng rng(seed);
    Scenario s;
    s.graph = std::move(g);
    s.protocol = cfg.protocol;
    const int k_hi = std::min(cfg.k_max, n);
    const int k_lo = std::max(cfg.k_min, cfg.min_good);
    const int k = static_cast<int>(rng.between(k_lo, k_hi));

    std::set<Label> labels;
    while (static_cast<int>(labels.size()) < k) {
        // half of the draws near each other: adjacent labels are the hard case for rendezvous
        Label l = 1 + rng.below(cfg.label_max);
        if (!labels.empty() && rng.chance(1, 3)) l = *labels.begin() + 1;
        if (l > cfg.label_max || l == 0) continue;
        labels.insert(l);
    }
    std::vector<NodeId> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = i;
    rng.shuffle(nodes);

    std::vector<Label> order(labels.begin(), labels.end());
    rng.shuffle(order);
    std::set<Label> good(order.begin(), order.begin() + cfg.min_good);

    const int first_awake = static_cast<int>(rng.below(k));
    int idx = 0;
    for (Label l : order) {
        AgentSpec a;
        a.label = l;
        const int roll = static_cast<int>(rng.below(10));
        if (roll == 0) {
            a.speed = cfg.speed_min;
        } else if (roll == 1) {
            a.speed = cfg.speed_max;
        } else {
            a.speed = random_fraction(rng, cfg.speed_min, cfg.speed_max, cfg.speed_den);
        }
        a.start = nodes[idx];
        if (idx == first_awake) {
            a.wake = Rational(0);
        } else if (!rng.chance(cfg.dormant_permille, 1000)) {
            a.wake = random_time(rng, Rational(0), cfg.wake_spread);
        }
        if (!good.count(l) && rng.chance(cfg.crash_permille, 1000)) {
            CrashSpec c;
            c.kind = cfg.protocol;
            if (rng.chance(cfg.reactive_permille, 1000)) {
                static const char* states[] = {"explorer", "token", "gatherer", "finder"};
                if (rng.chance(1, 4)) {
                    c.when = CrashSpec::When::AfterMeet;
                    c.other = order[rng.below(order.size())];
                } else {
                    c.when = CrashSpec::When::OnState;
                    c.state = states[rng.below(4)];
                }
                c.delay = random_time(rng, Rational(1, 4096), Rational(64));
            } else {
                const int mode = static_cast<int>(rng.below(3));
                const Rational wake = a.wake ? *a.wake : cfg.early_window;
                if (mode == 0 && wake > 0) {
                    c.time = random_time(rng, Rational(0), wake);  // before it ever moves
                    if (c.time >= wake) c.time = wake / 2;
                } else if (mode <= 1) {
                    c.time = random_time(rng, Rational(0), cfg.early_window);
                } else {
                    // log-uniform between the early window and the horizon hint
                    Rational t = cfg.early_window;
                    const Rational limit = cfg.horizon_hint;
                    int doublings = 0;
                    for (Rational x = t; x < limit; x *= 2) ++doublings;
                    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(doublings) + 1));
                    for (int d = 0; d < j; ++d) t *= 2;
                    c.time = t + random_time(rng, Rational(0), t);
                }
            }
            a.crash = c;
        }
        s.agents.push_back(std::move(a));
        ++idx;
    }
    return s;
}

Scenario lower_bound_ring(int k, int t1, int t2, int good_agents) {
    if (good_agents < 1 || good_agents > 2) throw std::invalid_argument("good_agents must be 1 or 2");
    Scenario s;
    s.protocol = FaultModel::Total;
    const int size = k == 1 ? 4 : 4 * (t1 + t2);
    if (size < 4) throw std::invalid_argument("ring would have fewer than 4 nodes");
    s.graph = std::make_shared<PortGraph>(oriented_ring(size));
    Label next_body = 100;
    for (int v = 0; v < size; v += 2) {
        AgentSpec body;
        body.label = next_body++;
        body.start = v;
        body.wake = Rational(0);
        CrashSpec c;
        c.kind = FaultModel::Total;
        c.time = Rational(0);
        body.crash = c;
        s.agents.push_back(body);
    }
    AgentSpec a;
    a.label = 1;
    a.start = 1;
    a.wake = Rational(0);
    s.agents.push_back(a);
    if (good_agents == 2) {
        AgentSpec b;
        b.label = 2;
        b.start = size == 4 ? 3 : 1 + size / 2;
        b.wake = Rational(0);
        s.agents.push_back(b);
    }
    return s;
}

// ---- text format -------------------------------------------------------------------

std::string crash_str(const CrashSpec& c) {
    std::string when;
    switch (c.when) {
        case CrashSpec::When::At: when = to_string(c.time); break;
        case CrashSpec::When::OnState: when = "on-state:" + c.state + "+" + to_string(c.delay); break;
        case CrashSpec::When::AfterMeet: when = "after-meet:" + std::to_string(c.other) + "+" + to_string(c.delay); break;
    }
    return when + "," + fault_name(c.kind);
}

std::string write_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "scenario 1\n";
    os << "protocol " << fault_name(s.protocol) << "\n";
    os << "horizon " << (s.horizon ? to_string(*s.horizon) : std::string("auto")) << "\n";
    os << "graph inline\n" << write_graph(*s.graph) << "end\n";
    for (const auto& a : s.agents) {
        os << "agent L=" << a.label << " v=" << to_string(a.speed) << " at=" << a.start
           << " wake=" << (a.wake ? to_string(*a.wake) : std::string("dormant"))
           << " crash=" << (a.crash ? crash_str(*a.crash) : std::string("none")) << "\n";
    }
    return os.str();
}

namespace {

[[noreturn]] void scen_error(int line, const std::string& msg) {
    throw std::runtime_error("scenario line " + std::to_string(line) + ": " + msg);
}

CrashSpec parse_crash(const std::string& v, int line) {
    auto comma = v.rfind(',');
    if (comma == std::string::npos) scen_error(line, "crash needs '<when>,<motion|total>'");
    CrashSpec c;
    c.kind = parse_fault(v.substr(comma + 1));
    const std::string when = v.substr(0, comma);
    auto reactive = [&](const std::string& prefix) {
        const std::string rest = when.substr(prefix.size());
        auto plus = rest.find('+');
        if (plus == std::string::npos) scen_error(line, "reactive crash needs '+<delay>'");
        c.delay = parse_rational(rest.substr(plus + 1));
        return rest.substr(0, plus);
    };
    if (when.rfind("on-state:", 0) == 0) {
        c.when = CrashSpec::When::OnState;
        c.state = reactive("on-state:");
    } else if (when.rfind("after-meet:", 0) == 0) {
        c.when = CrashSpec::When::AfterMeet;
        c.other = std::stoull(reactive("after-meet:"));
    } else {
        c.time = parse_rational(when);
    }
    return c;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    Scenario s;
    bool header = false;
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::string key;
        if (!(ls >> key)) continue;
        try {
            if (!header) {
                int v = 0;
                if (key != "scenario" || !(ls >> v) || v != 1) scen_error(line, "expected 'scenario 1'");
                header = true;
            } else if (key == "protocol") {
                std::string v;
                ls >> v;
                s.protocol = parse_fault(v);
            } else if (key == "horizon") {
                std::string v;
                ls >> v;
                if (v == "auto") s.horizon.reset();
                else s.horizon = parse_rational(v);
            } else if (key == "graph") {
                std::string mode;
                ls >> mode;
                if (mode == "inline") {
                    std::string body, gl;
                    const int start = line;
                    bool closed = false;
                    while (std::getline(in, gl)) {
                        ++line;
                        if (gl.find_first_not_of(" \t") != std::string::npos &&
                            gl.substr(gl.find_first_not_of(" \t"), 3) == "end") {
                            closed = true;
                            break;
                        }
                        body += gl + "\n";
                    }
                    if (!closed) scen_error(start, "inline graph lacks 'end'");
                    try {
                        s.graph = std::make_shared<PortGraph>(parse_graph(body));
                    } catch (const GraphError& e) {
                        scen_error(start, std::string("in inline graph: ") + e.what());
                    }
                } else if (mode == "file") {
                    std::string path;
                    ls >> path;
                    std::filesystem::path p(path);
                    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
                    s.graph = std::make_shared<PortGraph>(read_graph_file(p.string()));
                } else {
                    scen_error(line, "graph must be 'inline' or 'file <path>'");
                }
            } else if (key == "agent") {
                AgentSpec a;
                bool have_label = false, have_at = false;
                std::string tok;
                while (ls >> tok) {
                    auto eq = tok.find('=');
                    if (eq == std::string::npos) scen_error(line, "expected key=value, got '" + tok + "'");
                    const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
                    if (k == "L") {
                        a.label = std::stoull(v);
                        have_label = true;
                    } else if (k == "v") {
                        a.speed = parse_rational(v);
                    } else if (k == "at") {
                        a.start = std::stoi(v);
                        have_at = true;
                    } else if (k == "wake") {
                        if (v == "dormant") a.wake.reset();
                        else a.wake = parse_rational(v);
                    } else if (k == "crash") {
                        if (v != "none") a.crash = parse_crash(v, line);
                    } else {
                        scen_error(line, "unknown agent field '" + k + "'");
                    }
                }
                if (!have_label || !have_at) scen_error(line, "agent needs L= and at=");
                s.agents.push_back(std::move(a));
            } else {
                scen_error(line, "unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            scen_error(line, e.what());
        } catch (const std::out_of_range& e) {
            scen_error(line, e.what());
        }
    }
    if (!header) scen_error(line, "missing 'scenario 1' header");
    if (!s.graph) scen_error(line, "missing graph");
    return s;
}

Scenario read_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open scenario file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace gather
