#pragma once

#include "gather/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gather {

using NodeId = int;
using Port = int;

struct PortTarget {
    NodeId node = 0;
    Port entry = 0;
    bool operator==(const PortTarget&) const = default;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Undirected, connected, simple graph with local port numbers 0..deg-1 at each
// node. Node ids exist for the simulator only; agents never see them.
class PortGraph {
public:
    PortGraph() = default;
    // Validates symmetry, port ranges, simplicity and connectivity.
    explicit PortGraph(std::vector<std::vector<PortTarget>> adjacency);

    int size() const { return static_cast<int>(adj_.size()); }
    int degree(NodeId u) const { return static_cast<int>(adj_.at(u).size()); }
    int max_degree() const;
    int edge_count() const { return static_cast<int>(ends_.size()); }

    // Throws GraphError when p is not a port of u.
    PortTarget traverse(NodeId u, Port p) const;
    const std::vector<PortTarget>& ports(NodeId u) const { return adj_.at(u); }

    // Dense id of the undirected edge leaving u by port p; ends(e) has first < second.
    int edge_id(NodeId u, Port p) const { return edge_ids_[u][p]; }
    std::pair<NodeId, NodeId> ends(int e) const { return ends_.at(e); }

    bool operator==(const PortGraph& o) const { return adj_ == o.adj_; }

    // FNV-1a over the adjacency; stable across platforms.
    std::uint64_t fingerprint() const;

private:
    std::vector<std::vector<PortTarget>> adj_;
    std::vector<std::vector<int>> edge_ids_;
    std::vector<std::pair<NodeId, NodeId>> ends_;
};

// A point of an edge {u,v}, u < v, at exact distance `offset` from u.
// Canonical form keeps 0 < offset < 1; endpoints are represented as nodes.
struct EdgePoint {
    NodeId u = 0;
    NodeId v = 0;
    Rational offset;
    bool operator==(const EdgePoint&) const = default;
};

struct Location {
    NodeId node = -1;  // >= 0 when the location is a node
    EdgePoint edge;    // meaningful when node < 0

    bool at_node() const { return node >= 0; }
    static Location of_node(NodeId n) { return Location{n, {}}; }
    // Offset measured from `from`; canonicalises 0 and 1 to nodes.
    static Location on_edge(NodeId from, NodeId to, const Rational& offset_from_from);
    bool operator==(const Location& o) const;
    std::string str() const;
};

// Total order used for deterministic tie-breaking: nodes first, then edges
// lexicographically by (u, v, offset).
bool location_less(const Location& a, const Location& b);

// ---- generators --------------------------------------------------------

// Port labelling "in increasing neighbour id order" at every node.
PortGraph from_edges(int n, const std::vector<std::pair<NodeId, NodeId>>& edges);
// Port 0 leads to the successor, port 1 to the predecessor (k >= 3).
PortGraph oriented_ring(int k);
PortGraph clique(int k);
PortGraph path_graph(int k);
PortGraph star(int k);
PortGraph random_tree(int k, std::uint64_t seed);
// Random spanning tree plus each further pair independently with the given probability (in 1/1000s).
PortGraph random_connected(int k, std::uint64_t seed, int extra_edge_permille = 250);
// Same graph, each node's ports permuted by a seeded shuffle.
PortGraph relabel_ports(const PortGraph& g, std::uint64_t seed);

// One canonically labelled representative per isomorphism class of connected
// graphs with 1..max_n nodes, ordered by size and canonical code.
std::vector<PortGraph> enumerate_connected_classes(int max_n);
// Classes plus `extra_labelings` seeded port relabelings of each.
std::vector<PortGraph> enumerate_connected(int max_n, int extra_labelings, std::uint64_t seed);

// ---- text format ---------------------------------------------------------
//   graph <n>
//   <u>: (<v>,<entry>) (<v>,<entry>) ...     # the i-th pair is port i
// '#' starts a comment. Errors carry the 1-based line number.
std::string write_graph(const PortGraph& g);
PortGraph parse_graph(const std::string& text);
PortGraph read_graph_file(const std::string& path);

}  // namespace gather
