#include "gather/graph.hpp"

#include "gather/rng.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace gather {

PortGraph::PortGraph(std::vector<std::vector<PortTarget>> adjacency) : adj_(std::move(adjacency)) {
    const int n = size();
    if (n == 0) throw GraphError("graph has no nodes");
    edge_ids_.assign(n, {});
    for (NodeId u = 0; u < n; ++u) {
        edge_ids_[u].assign(adj_[u].size(), -1);
        std::set<NodeId> seen;
        for (Port p = 0; p < degree(u); ++p) {
            const PortTarget t = adj_[u][p];
            if (t.node < 0 || t.node >= n)
                throw GraphError("node " + std::to_string(u) + " port " + std::to_string(p) + " leads to unknown node " +
                                 std::to_string(t.node));
            if (t.node == u) throw GraphError("self-loop at node " + std::to_string(u));
            if (!seen.insert(t.node).second)
                throw GraphError("parallel edge between " + std::to_string(u) + " and " + std::to_string(t.node));
            if (t.entry < 0 || t.entry >= static_cast<int>(adj_[t.node].size()))
                throw GraphError("node " + std::to_string(u) + " port " + std::to_string(p) +
                                 " names missing port " + std::to_string(t.entry) + " at node " +
                                 std::to_string(t.node));
            const PortTarget back = adj_[t.node][t.entry];
            if (back.node != u || back.entry != p)
                throw GraphError("asymmetric port map: (" + std::to_string(u) + "," + std::to_string(p) + ") -> (" +
                                 std::to_string(t.node) + "," + std::to_string(t.entry) + ") but back leads to (" +
                                 std::to_string(back.node) + "," + std::to_string(back.entry) + ")");
        }
    }
    // connectivity
    std::vector<char> mark(n, 0);
    std::vector<NodeId> stack{0};
    mark[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (const auto& t : adj_[u]) {
            if (!mark[t.node]) {
                mark[t.node] = 1;
                ++reached;
                stack.push_back(t.node);
            }
        }
    }
    if (reached != n) throw GraphError("graph is disconnected (" + std::to_string(reached) + " of " +
                                       std::to_string(n) + " nodes reachable from node 0)");
    for (NodeId u = 0; u < n; ++u) {
        for (Port p = 0; p < degree(u); ++p) {
            const PortTarget t = adj_[u][p];
            if (u < t.node) {
                const int id = static_cast<int>(ends_.size());
                ends_.emplace_back(u, t.node);
                edge_ids_[u][p] = id;
                edge_ids_[t.node][t.entry] = id;
            }
        }
    }
}

int PortGraph::max_degree() const {
    int d = 0;
    for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
    return d;
}

PortTarget PortGraph::traverse(NodeId u, Port p) const {
    if (u < 0 || u >= size()) throw GraphError("no node " + std::to_string(u));
    if (p < 0 || p >= degree(u))
        throw GraphError("invalid port " + std::to_string(p) + " at node " + std::to_string(u) + " of degree " +
                         std::to_string(degree(u)));
    return adj_[u][p];
}

std::uint64_t PortGraph::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    feed(static_cast<std::uint64_t>(size()));
    for (const auto& a : adj_) {
        feed(a.size());
        for (const auto& t : a) {
            feed(static_cast<std::uint64_t>(t.node));
            feed(static_cast<std::uint64_t>(t.entry));
        }
    }
    return h;
}

Location Location::on_edge(NodeId from, NodeId to, const Rational& offset_from_from) {
    if (offset_from_from <= 0) return of_node(from);
    if (offset_from_from >= 1) return of_node(to);
    Location loc;
    if (from < to) {
        loc.edge = EdgePoint{from, to, offset_from_from};
    } else {
        loc.edge = EdgePoint{to, from, Rational(1) - offset_from_from};
    }
    return loc;
}

bool Location::operator==(const Location& o) const {
    if (at_node() != o.at_node()) return false;
    if (at_node()) return node == o.node;
    return edge == o.edge;
}

std::string Location::str() const {
    if (at_node()) return "n" + std::to_string(node);
    return "e" + std::to_string(edge.u) + "-" + std::to_string(edge.v) + "@" + to_string(edge.offset);
}

bool location_less(const Location& a, const Location& b) {
    if (a.at_node() != b.at_node()) return a.at_node();
    if (a.at_node()) return a.node < b.node;
    if (a.edge.u != b.edge.u) return a.edge.u < b.edge.u;
    if (a.edge.v != b.edge.v) return a.edge.v < b.edge.v;
    return a.edge.offset < b.edge.offset;
}

// ---- generators ------------------------------------------------------------

PortGraph from_edges(int n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<std::vector<NodeId>> nbr(n);
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw GraphError("edge endpoint out of range");
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    for (auto& l : nbr) std::sort(l.begin(), l.end());
    std::vector<std::vector<PortTarget>> adj(n);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : nbr[u]) {
            auto it = std::lower_bound(nbr[v].begin(), nbr[v].end(), u);
            adj[u].push_back({v, static_cast<Port>(it - nbr[v].begin())});
        }
    }
    return PortGraph(std::move(adj));
}

PortGraph oriented_ring(int k) {
    if (k < 3) throw GraphError("ring needs at least 3 nodes");
    std::vector<std::vector<PortTarget>> adj(k);
    for (NodeId i = 0; i < k; ++i) {
        adj[i] = {{(i + 1) % k, 1}, {(i + k - 1) % k, 0}};
    }
    return PortGraph(std::move(adj));
}

PortGraph clique(int k) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) e.emplace_back(a, b);
    return from_edges(k, e);
}

PortGraph path_graph(int k) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int a = 0; a + 1 < k; ++a) e.emplace_back(a, a + 1);
    return from_edges(k, e);
}

PortGraph star(int k) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int a = 1; a < k; ++a) e.emplace_back(0, a);
    return from_edges(k, e);
}

PortGraph random_tree(int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int a = 1; a < k; ++a) e.emplace_back(static_cast<NodeId>(rng.below(a)), a);
    return relabel_ports(from_edges(k, e), rng.next());
}

PortGraph random_connected(int k, std::uint64_t seed, int extra_edge_permille) {
    Rng rng(seed);
    std::vector<NodeId> order(k);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::set<std::pair<NodeId, NodeId>> e;
    for (int a = 1; a < k; ++a) {
        NodeId x = order[a], y = order[rng.below(a)];
        e.insert({std::min(x, y), std::max(x, y)});
    }
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (rng.below(1000) < static_cast<std::uint64_t>(extra_edge_permille)) e.insert({a, b});
    return relabel_ports(from_edges(k, {e.begin(), e.end()}), rng.next());
}

PortGraph relabel_ports(const PortGraph& g, std::uint64_t seed) {
    Rng rng(seed);
    const int n = g.size();
    std::vector<std::vector<Port>> perm(n);  // perm[u][old] = new
    for (NodeId u = 0; u < n; ++u) {
        perm[u].resize(g.degree(u));
        std::iota(perm[u].begin(), perm[u].end(), 0);
        rng.shuffle(perm[u]);
    }
    std::vector<std::vector<PortTarget>> adj(n);
    for (NodeId u = 0; u < n; ++u) {
        adj[u].resize(g.degree(u));
        for (Port p = 0; p < g.degree(u); ++p) {
            const PortTarget t = g.traverse(u, p);
            adj[u][perm[u][p]] = {t.node, perm[t.node][t.entry]};
        }
    }
    return PortGraph(std::move(adj));
}

// ---- enumeration -----------------------------------------------------------

namespace {

// bit index of pair (a,b), a<b, in an n-node upper triangle
inline int pair_bit(int a, int b) { return b * (b - 1) / 2 + a; }

std::uint32_t canonical_code(int n, std::uint32_t code) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<int, int>> pairs;
    for (int b = 1; b < n; ++b)
        for (int a = 0; a < b; ++a)
            if (code & (1u << pair_bit(a, b))) pairs.emplace_back(a, b);
    std::uint32_t best = UINT32_MAX;
    do {
        std::uint32_t c = 0;
        for (auto [a, b] : pairs) {
            int x = perm[a], y = perm[b];
            if (x > y) std::swap(x, y);
            c |= 1u << pair_bit(x, y);
        }
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

PortGraph graph_from_code(int n, std::uint32_t code) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int b = 1; b < n; ++b)
        for (int a = 0; a < b; ++a)
            if (code & (1u << pair_bit(a, b))) e.emplace_back(a, b);
    return from_edges(n, e);
}

}  // namespace

std::vector<PortGraph> enumerate_connected_classes(int max_n) {
    if (max_n > 7) throw GraphError("exhaustive enumeration is limited to 7 nodes");
    std::vector<PortGraph> out;
    if (max_n < 1) return out;
    // Every connected graph on n >= 2 nodes has a non-cut vertex, so extending
    // each (n-1)-class by a new vertex with a non-empty neighbourhood reaches
    // every n-class.
    std::vector<std::uint32_t> level{0};
    out.push_back(graph_from_code(1, 0));
    for (int n = 2; n <= max_n; ++n) {
        std::set<std::uint32_t> next;
        const int v = n - 1;
        for (std::uint32_t base : level) {
            for (std::uint32_t nb = 1; nb < (1u << v); ++nb) {
                std::uint32_t c = base;
                for (int a = 0; a < v; ++a)
                    if (nb & (1u << a)) c |= 1u << pair_bit(a, v);
                next.insert(canonical_code(n, c));
            }
        }
        level.assign(next.begin(), next.end());
        for (std::uint32_t c : level) out.push_back(graph_from_code(n, c));
    }
    return out;
}

std::vector<PortGraph> enumerate_connected(int max_n, int extra_labelings, std::uint64_t seed) {
    std::vector<PortGraph> out;
    std::uint64_t k = 0;
    for (const auto& g : enumerate_connected_classes(max_n)) {
        out.push_back(g);
        std::set<std::uint64_t> have{g.fingerprint()};
        for (int j = 0; j < extra_labelings; ++j) {
            PortGraph r = relabel_ports(g, mix_seed(seed, k++));
            if (have.insert(r.fingerprint()).second) out.push_back(std::move(r));
        }
    }
    return out;
}

// ---- text format -------------------------------------------------------------

std::string write_graph(const PortGraph& g) {
    std::ostringstream os;
    os << "graph " << g.size() << "\n";
    for (NodeId u = 0; u < g.size(); ++u) {
        os << u << ":";
        for (const auto& t : g.ports(u)) os << " (" << t.node << "," << t.entry << ")";
        os << "\n";
    }
    return os.str();
}

namespace {

[[noreturn]] void fail_at(int line, const std::string& msg) {
    throw GraphError("line " + std::to_string(line) + ": " + msg);
}

int parse_int_token(const std::string& s, int line) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail_at(line, "expected integer, got '" + s + "'");
    return std::stoi(s);
}

}  // namespace

PortGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0, n = -1, header_line = 0;
    std::vector<std::vector<PortTarget>> adj;
    std::vector<int> defined_at;
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::string head;
        if (!(ls >> head)) continue;
        if (n < 0) {
            if (head != "graph") fail_at(line, "expected 'graph <n>' header");
            std::string cnt;
            if (!(ls >> cnt)) fail_at(line, "missing node count");
            n = parse_int_token(cnt, line);
            if (n < 1) fail_at(line, "node count must be positive");
            adj.assign(n, {});
            defined_at.assign(n, 0);
            header_line = line;
            continue;
        }
        if (head.back() != ':') fail_at(line, "expected '<node>:'");
        const int u = parse_int_token(head.substr(0, head.size() - 1), line);
        if (u >= n) fail_at(line, "node " + std::to_string(u) + " out of range");
        if (defined_at[u]) fail_at(line, "node " + std::to_string(u) + " already defined on line " + std::to_string(defined_at[u]));
        defined_at[u] = line;
        std::string tok;
        while (ls >> tok) {
            if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')') fail_at(line, "bad port entry '" + tok + "'");
            auto comma = tok.find(',');
            if (comma == std::string::npos) fail_at(line, "bad port entry '" + tok + "'");
            const int v = parse_int_token(tok.substr(1, comma - 1), line);
            const int q = parse_int_token(tok.substr(comma + 1, tok.size() - comma - 2), line);
            if (v >= n) fail_at(line, "neighbour " + std::to_string(v) + " out of range");
            adj[u].push_back({v, q});
        }
    }
    if (n < 0) fail_at(line, "empty graph description");
    for (int u = 0; u < n; ++u)
        if (!defined_at[u]) fail_at(header_line, "node " + std::to_string(u) + " has no adjacency line");
    try {
        return PortGraph(std::move(adj));
    } catch (const GraphError& e) {
        throw GraphError(std::string("invalid graph: ") + e.what());
    }
}

PortGraph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw GraphError("cannot open graph file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_graph(ss.str());
}

}  // namespace gather
