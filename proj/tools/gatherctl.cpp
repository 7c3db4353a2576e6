// gatherctl: graphs, scenarios, certified tables, runs and verdicts.
//
// Exit codes: 0 pass, 1 fail, 2 indeterminate, 3 usage / bad input.

#include "gather/certify.hpp"
#include "gather/harness.hpp"
#include "gather/protocols.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef GATHER_DEFAULT_TABLE
#define GATHER_DEFAULT_TABLE "data/table.txt"
#endif

using namespace gather;

namespace {

constexpr int kUsage = 3;

struct Common {
    std::uint64_t seed = 1;
    std::string table = GATHER_DEFAULT_TABLE;
    std::string format = "text";
    bool csv() const { return format == "csv"; }
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "seed for every random choice")->capture_default_str();
    cmd->add_option("--table", c.table, "certified bound table")->capture_default_str();
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

PolyTable load_table(const Common& c) {
    try {
        return read_table_file(c.table);
    } catch (const std::exception& e) {
        throw UsageError("table " + c.table + ": " + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    try {
        return read_scenario_file(path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

// ---- verdict printing ------------------------------------------------------------

void print_verdict(const Verdict& v, const Common& c, std::ostream& os) {
    if (c.csv()) {
        os << "outcome,violated,witnesses,gathering_time,bound_id,observed,bound,ratio\n";
        std::string viol, wit;
        for (const auto& x : v.violated) viol += (viol.empty() ? "" : ";") + x;
        for (auto w : v.witnesses) wit += (wit.empty() ? "" : ";") + std::to_string(w);
        const std::string gt = v.gathering_time ? to_string(*v.gathering_time) : "";
        if (v.checks.empty()) os << outcome_name(v.outcome) << "," << viol << "," << wit << "," << gt << ",,,,\n";
        for (const auto& l : v.checks)
            os << outcome_name(v.outcome) << "," << viol << "," << wit << "," << gt << "," << l.id << ","
               << (l.applicable ? to_string(l.observed) : "") << "," << to_string(l.bound) << ","
               << (l.applicable ? std::to_string(l.ratio()) : "") << "\n";
        return;
    }
    os << "verdict " << outcome_name(v.outcome) << "\n";
    if (!v.violated.empty()) {
        os << "violated";
        for (const auto& x : v.violated) os << " " << x;
        os << "\nwitness events";
        for (auto w : v.witnesses) os << " " << w;
        os << "\n";
    }
    if (!v.detail.empty()) os << "detail " << v.detail << "\n";
    if (v.gathering_time) os << "gathering time " << to_string(*v.gathering_time) << " (~" << to_double(*v.gathering_time) << ")\n";
    if (!v.sigma.empty()) {
        os << "sigma";
        for (auto l : v.sigma) os << " " << l;
        os << "\n";
    }
    for (const auto& l : v.checks) {
        os << "  " << l.id << ": ";
        if (l.applicable)
            os << "observed ~" << to_double(l.observed) << " <= bound ~" << to_double(l.bound) << "  ratio " << l.ratio()
               << (l.exceeded() ? "  EXCEEDED" : "") << "\n";
        else
            os << "n/a (" << l.note << ")\n";
    }
}

// ---- subcommands -----------------------------------------------------------------------

struct GraphOpts {
    std::string kind = "random";
    int n = 6;
    int density = 250;
    std::string out;
};

PortGraph make_graph(const GraphOpts& o, std::uint64_t seed) {
    if (o.kind == "ring") return oriented_ring(o.n);
    if (o.kind == "path") return path_graph(o.n);
    if (o.kind == "star") return star(o.n);
    if (o.kind == "clique") return clique(o.n);
    if (o.kind == "tree") return random_tree(o.n, seed);
    return random_connected(o.n, seed, o.density);
}

int cmd_gen_graph(const GraphOpts& o, const Common& c) {
    const PortGraph g = make_graph(o, c.seed);
    if (!c.csv()) {
        emit(write_graph(g), o.out);
        return 0;
    }
    std::string out = "u,port,v,entry\n";
    for (NodeId u = 0; u < g.size(); ++u)
        for (Port p = 0; p < g.degree(u); ++p) {
            const PortTarget t = g.traverse(u, p);
            out += std::to_string(u) + "," + std::to_string(p) + "," + std::to_string(t.node) + "," +
                   std::to_string(t.entry) + "\n";
        }
    emit(out, o.out);
    return 0;
}

struct ScenarioOpts {
    std::string graph_file;
    GraphOpts graph;
    std::string faults = "motion";
    int k_min = 2, k_max = 5;
    int crash_permille = 400;
    int min_good = 0;
    Label label_max = 1u << 16;
};

int cmd_gen_scenario(const ScenarioOpts& o, const Common& c) {
    auto g = std::make_shared<PortGraph>(o.graph_file.empty() ? make_graph(o.graph, c.seed)
                                                               : read_graph_file(o.graph_file));
    GenConfig cfg;
    cfg.protocol = parse_fault(o.faults);
    cfg.k_min = o.k_min;
    cfg.k_max = o.k_max;
    cfg.crash_permille = o.crash_permille;
    cfg.label_max = o.label_max;
    cfg.min_good = o.min_good > 0 ? o.min_good : (cfg.protocol == FaultModel::Motion ? 1 : 2);
    Scenario s;
    try {
        s = gen_random(g, cfg, c.seed);
    } catch (const UnsatisfiableConfig& e) {
        throw UsageError(e.what());
    }
    if (!c.csv()) {
        emit(write_scenario(s), o.graph.out);
        return 0;
    }
    std::string out = "label,speed,start,wake,crash\n";
    for (const auto& a : s.agents)
        out += std::to_string(a.label) + "," + to_string(a.speed) + "," + std::to_string(a.start) + "," +
               (a.wake ? to_string(*a.wake) : "dormant") + "," + (a.crash ? crash_str(*a.crash) : "none") + "\n";
    emit(out, o.graph.out);
    return 0;
}

struct CertifyCmd {
    int n_max = 10;
    int label_len_max = 17;
    bool replay = false;
    bool quiet = false;
};

std::string table_rows(const PolyTable& t, bool csv) {
    std::ostringstream os;
    if (csv) {
        os << "n,P,rho";
        for (int l = 1; l <= t.label_len_max; ++l) os << ",Pi_" << l;
        os << "\n";
        for (int n = 1; n <= t.n_max; ++n) {
            os << n << "," << t.P(n) << "," << t.rho(n);
            for (int l = 1; l <= t.label_len_max; ++l) os << "," << t.Pi(n, l);
            os << "\n";
        }
        return os.str();
    }
    os << "table " << t.fingerprint() << "  n_max " << t.n_max << "  label_len_max " << t.label_len_max << "\n";
    for (int n = 1; n <= t.n_max; ++n)
        os << "  n=" << n << "  P=" << t.P(n) << "  rho=" << t.rho(n) << "  Pi(n,1)=" << t.Pi(n, 1)
           << "  Pi(n," << t.label_len_max << ")=" << t.Pi(n, t.label_len_max) << "\n";
    return os.str();
}

int cmd_certify(const CertifyCmd& o, const Common& c) {
    CorpusOptions co;
    co.n_max = o.n_max;
    co.seed = c.seed;
    const auto corpus = build_corpus(co);
    CertifyOptions opt;
    opt.n_max = o.n_max;
    opt.label_len_max = o.label_len_max;
    opt.seed = c.seed;
    const auto start = std::chrono::steady_clock::now();
    if (!o.quiet)
        opt.log = [&](const std::string& msg) {
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::cerr << "[" << static_cast<int>(s) << "s] " << msg << "\n";
        };
    if (o.replay) {
        const PolyTable t = load_table(c);
        if (auto w = replay_certification(corpus, t, opt)) {
            std::cout << "replay FAIL: " << *w << "\n";
            return 1;
        }
        std::cout << "replay PASS: " << corpus.size() << " corpus graphs, table " << t.fingerprint() << "\n";
        return 0;
    }
    PolyTable t;
    try {
        t = certify(corpus, opt);
    } catch (const CertificationFailure& e) {
        std::cout << "certification FAIL: " << e.what() << "\n";
        return 1;
    }
    write_table_file(t, c.table);
    std::cout << table_rows(t, c.csv());
    return 0;
}

struct RunCmd {
    std::string scenario;
    std::string trace_out;
    std::string horizon;
};

int cmd_run(const RunCmd& o, const Common& c) {
    Scenario s = load_scenario(o.scenario);
    const auto issues = validate(s);
    for (const auto& i : issues) std::cerr << (i.warning ? "warning " : "error ") << i.code << ": " << i.detail << "\n";
    if (!accepted(issues)) return kUsage;
    if (!o.horizon.empty()) s.horizon = parse_rational(o.horizon);
    const PolyTable table = load_table(c);
    RunReport r = run_and_check(s, table, c.seed);
    if (!o.trace_out.empty()) emit(write_trace(r.trace), o.trace_out);
    std::ostream& os = o.trace_out == "-" ? std::cerr : std::cout;
    if (!c.csv())
        os << "run " << status_name(r.result.status) << "  events " << r.trace.events.size() << "  traversals "
           << r.result.traversals << "\n";
    print_verdict(r.verdict, c, os);
    return exit_code(r.verdict.outcome);
}

struct VerifyCmd {
    std::string scenario;
    std::string trace;
};

int cmd_verify(const VerifyCmd& o, const Common& c) {
    const Scenario s = load_scenario(o.scenario);
    Trace t;
    try {
        t = parse_trace(slurp(o.trace));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("trace: ") + e.what());
    }
    const PolyTable table = load_table(c);
    const Verdict v = check_all(t, s, table);
    print_verdict(v, c, std::cout);
    return exit_code(v.outcome);
}

struct SweepCmd {
    std::string faults = "motion";
    int count = 100;
    int n_min = 3, n_max = 0;
    int k_min = 2, k_max = 5;
    int crash_permille = 400;
    std::string out;
};

SweepConfig sweep_config(const SweepCmd& o) {
    SweepConfig cfg;
    cfg.protocol = parse_fault(o.faults);
    cfg.scenarios = o.count;
    cfg.n_min = o.n_min;
    cfg.n_max = o.n_max;
    cfg.k_min = o.k_min;
    cfg.k_max = o.k_max;
    cfg.crash_permille = o.crash_permille;
    return cfg;
}

int cmd_sweep(const SweepCmd& o, const Common& c) {
    const PolyTable table = load_table(c);
    const SweepReport r = sweep(sweep_config(o), table, c.seed);
    if (!o.out.empty()) emit(sweep_csv(r), o.out);
    if (o.out != "-") std::cout << (c.csv() ? sweep_csv(r) : sweep_text(r));
    return exit_code(r.overall());
}

struct DemoCmd {
    int t1 = 1, t2 = 1;
};

int cmd_demo(const DemoCmd& o, const Common& c) {
    const PolyTable table = load_table(c);
    const auto cases = demo_impossibility(table, o.t1, o.t2);
    bool ok = true;
    if (c.csv()) std::cout << "ring,two_good,two_good_time,horizon,one_good_declared,left_cruiser,cruiser_duration,result\n";
    for (const auto& d : cases) {
        ok = ok && d.passed();
        if (c.csv()) {
            std::cout << d.name << "," << outcome_name(d.two_good_outcome) << "," << to_string(d.two_good_time) << ","
                      << to_string(d.horizon) << "," << d.one_good_declared << "," << d.one_good_left_cruiser << ","
                      << to_string(d.cruiser_duration) << "," << (d.passed() ? "PASS" : "FAIL") << "\n";
            continue;
        }
        std::cout << d.name << ":\n"
                  << "  2 good agents: " << outcome_name(d.two_good_outcome) << ", gathered after ~"
                  << to_double(d.two_good_time) << "\n"
                  << "  1 good agent:  horizon ~" << to_double(d.horizon) << ", "
                  << (d.one_good_declared ? "DECLARED (protocol bug)" : "no declaration") << ", "
                  << (d.one_good_left_cruiser ? "left cruiser" : "cruiser throughout") << " for ~"
                  << to_double(d.cruiser_duration) << "\n";
    }
    if (!c.csv()) std::cout << "demo " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

struct PlotCmd {
    std::string what = "sweep";
    SweepCmd sweep;
};

int cmd_export(const PlotCmd& o, const Common& c) {
    const PolyTable table = load_table(c);
    std::string data;
    Outcome outcome = Outcome::Pass;
    if (o.what == "table") {
        // Long format: one row per (n, label length).
        data = "n,label_len,P,rho,Pi\n";
        for (int n = 1; n <= table.n_max; ++n)
            for (int l = 1; l <= table.label_len_max; ++l)
                data += std::to_string(n) + "," + std::to_string(l) + "," + to_string(table.P(n)) + "," +
                        to_string(table.rho(n)) + "," + to_string(table.Pi(n, l)) + "\n";
    } else {
        const SweepReport r = sweep(sweep_config(o.sweep), table, c.seed);
        data = sweep_csv(r);
        outcome = r.overall();
    }
    if (!c.csv()) {
        // Whitespace-separated columns, for gnuplot.
        for (char& ch : data)
            if (ch == ',') ch = ' ';
    }
    emit(data, o.sweep.out);
    return exit_code(outcome);
}

void add_sweep_options(CLI::App* cmd, SweepCmd& o) {
    cmd->add_option("--faults", o.faults, "fault model")->check(CLI::IsMember({"motion", "total"}))->capture_default_str();
    cmd->add_option("--count", o.count, "number of scenarios")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--n-min", o.n_min, "smallest graph")->capture_default_str();
    cmd->add_option("--n-max", o.n_max, "largest graph (0: table n_max)")->capture_default_str();
    cmd->add_option("--k-min", o.k_min, "fewest agents")->capture_default_str();
    cmd->add_option("--k-max", o.k_max, "most agents")->capture_default_str();
    cmd->add_option("--crash-permille", o.crash_permille, "crash chance per agent")->check(CLI::Range(0, 1000))->capture_default_str();
    cmd->add_option("-o,--out", o.out, "CSV output file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gathering of crash-prone mobile agents: simulate, certify, verify"};
    app.require_subcommand(1);

    Common common;
    GraphOpts graph;
    ScenarioOpts scen;
    CertifyCmd cert;
    RunCmd runc;
    VerifyCmd ver;
    SweepCmd sw;
    DemoCmd demo;
    PlotCmd plot;

    auto* g = app.add_subcommand("gen-graph", "generate a port-labelled graph");
    add_common(g, common);
    g->add_option("--kind", graph.kind, "graph family")
        ->check(CLI::IsMember({"ring", "path", "star", "clique", "tree", "random"}))
        ->capture_default_str();
    g->add_option("-n,--nodes", graph.n, "node count")->check(CLI::Range(1, 100000))->capture_default_str();
    g->add_option("--density", graph.density, "extra-edge chance in 1/1000 (random)")->capture_default_str();
    g->add_option("-o,--out", graph.out, "output file");

    auto* gs = app.add_subcommand("gen-scenario", "generate an adversarial scenario");
    add_common(gs, common);
    gs->add_option("--graph", scen.graph_file, "graph file (default: generate one)")->check(CLI::ExistingFile);
    gs->add_option("--kind", scen.graph.kind, "graph family when generating")
        ->check(CLI::IsMember({"ring", "path", "star", "clique", "tree", "random"}));
    gs->add_option("-n,--nodes", scen.graph.n, "node count when generating")->check(CLI::Range(2, 100000));
    gs->add_option("--faults", scen.faults, "fault model")->check(CLI::IsMember({"motion", "total"}))->capture_default_str();
    gs->add_option("--k-min", scen.k_min, "fewest agents")->capture_default_str();
    gs->add_option("--k-max", scen.k_max, "most agents")->capture_default_str();
    gs->add_option("--crash-permille", scen.crash_permille, "crash chance per agent")->check(CLI::Range(0, 1000));
    gs->add_option("--min-good", scen.min_good, "good agents to keep (0: 1 motion / 2 total)");
    gs->add_option("--label-max", scen.label_max, "largest label")->capture_default_str();
    gs->add_option("-o,--out", scen.graph.out, "output file");

    auto* ce = app.add_subcommand("certify", "certify P, rho, pi, Pi on the corpus and write --table");
    add_common(ce, common);
    ce->add_option("--n-max", cert.n_max, "largest certified graph")->check(CLI::Range(2, 16))->capture_default_str();
    ce->add_option("--label-len-max", cert.label_len_max, "longest certified label")->check(CLI::Range(1, 63))->capture_default_str();
    ce->add_flag("--replay", cert.replay, "re-run fresh certification samples against the existing --table");
    ce->add_flag("-q,--quiet", cert.quiet, "no progress log");

    auto* ru = app.add_subcommand("run", "simulate a scenario and check the trace");
    add_common(ru, common);
    ru->add_option("scenario", runc.scenario, "scenario file")->required()->check(CLI::ExistingFile);
    ru->add_option("-t,--trace", runc.trace_out, "write the trace here ('-' for stdout)");
    ru->add_option("--horizon", runc.horizon, "simulation horizon (default: 4x the declaration bound)");

    auto* ve = app.add_subcommand("verify", "check a recorded trace");
    add_common(ve, common);
    ve->add_option("scenario", ver.scenario, "scenario file")->required()->check(CLI::ExistingFile);
    ve->add_option("trace", ver.trace, "trace file")->required()->check(CLI::ExistingFile);

    auto* swc = app.add_subcommand("sweep", "run seeded scenarios over the corpus");
    add_common(swc, common);
    add_sweep_options(swc, sw);

    auto* de = app.add_subcommand("demo", "one-good-agent ring under total faults");
    add_common(de, common);
    de->add_option("--t1", demo.t1, "ring parameter t1")->check(CLI::PositiveNumber)->capture_default_str();
    de->add_option("--t2", demo.t2, "ring parameter t2")->check(CLI::PositiveNumber)->capture_default_str();

    auto* ex = app.add_subcommand("export-plot-data", "bound tables or sweep ratios for plotting");
    add_common(ex, common);
    ex->add_option("--what", plot.what, "data set")->check(CLI::IsMember({"sweep", "table"}))->capture_default_str();
    add_sweep_options(ex, plot.sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*g) return cmd_gen_graph(graph, common);
        if (*gs) return cmd_gen_scenario(scen, common);
        if (*ce) return cmd_certify(cert, common);
        if (*ru) return cmd_run(runc, common);
        if (*ve) return cmd_verify(ver, common);
        if (*swc) return cmd_sweep(sw, common);
        if (*de) return cmd_demo(demo, common);
        if (*ex) return cmd_export(plot, common);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return kUsage;
}
