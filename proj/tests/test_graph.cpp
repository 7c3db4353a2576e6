#include "gather/graph.hpp"
#include "gather/rational.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace gather;

namespace {

// Reference count of connected graphs on n unlabelled nodes, by brute force:
// every edge subset, canonical form = lexicographically smallest adjacency
// bitmask over all node permutations.
int brute_force_connected_classes(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::set<std::uint64_t> classes;
    const std::uint64_t subsets = std::uint64_t{1} << pairs.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int comps = n;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (mask >> i & 1) {
                int a = find(pairs[i].first), b = find(pairs[i].second);
                if (a != b) {
                    parent[a] = b;
                    --comps;
                }
            }
        if (comps != 1) continue;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::uint64_t best = UINT64_MAX;
        do {
            std::uint64_t code = 0;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (mask >> i & 1) {
                    int a = perm[pairs[i].first], b = perm[pairs[i].second];
                    if (a > b) std::swap(a, b);
                    const auto idx = std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) - pairs.begin();
                    code |= std::uint64_t{1} << idx;
                }
            best = std::min(best, code);
        } while (std::next_permutation(perm.begin(), perm.end()));
        classes.insert(best);
    }
    return static_cast<int>(classes.size());
}

bool ports_symmetric(const PortGraph& g) {
    for (NodeId u = 0; u < g.size(); ++u)
        for (Port p = 0; p < g.degree(u); ++p) {
            const PortTarget t = g.traverse(u, p);
            const PortTarget back = g.traverse(t.node, t.entry);
            if (back.node != u || back.entry != p) return false;
        }
    return true;
}

}  // namespace

TEST(Rational, MakeRationalIsCanonical) {
    const Rational r = make_rational(6, 8);
    EXPECT_EQ(r.get_num(), 3);
    EXPECT_EQ(r.get_den(), 4);
    EXPECT_EQ(make_rational(-2, -4), make_rational(1, 2));
    EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
}

TEST(Rational, TextRoundTrip) {
    for (const char* s : {"0/1", "7/1", "-3/4", "123456789012345678901234567891/1024"})
        EXPECT_EQ(to_string(parse_rational(s)), s);
    EXPECT_EQ(parse_rational("5"), Rational(5));
    EXPECT_THROW(parse_rational("1/x"), std::invalid_argument);
    EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Rational, BitLength) {
    EXPECT_EQ(bit_length(1), 1);
    EXPECT_EQ(bit_length(2), 2);
    EXPECT_EQ(bit_length(3), 2);
    EXPECT_EQ(bit_length(65535), 16);
    EXPECT_EQ(bit_length(65536), 17);
}

TEST(Rational, FloorCeil) {
    EXPECT_EQ(floor_of(make_rational(7, 2)), 3);
    EXPECT_EQ(ceil_of(make_rational(7, 2)), 4);
    EXPECT_EQ(floor_of(make_rational(-7, 2)), -4);
    EXPECT_EQ(ceil_of(Rational(5)), 5);
}

TEST(PortGraph, RejectsAsymmetricPorts) {
    // 0 -p0-> 1 claims entry 0, but 1's port 0 leads to 2
    std::vector<std::vector<PortTarget>> adj{{{1, 0}}, {{2, 0}, {0, 0}}, {{1, 0}}};
    EXPECT_THROW(PortGraph{adj}, GraphError);
}

TEST(PortGraph, RejectsDisconnectedAndLoops) {
    EXPECT_THROW(from_edges(4, {{0, 1}, {2, 3}}), GraphError);
    EXPECT_THROW(from_edges(2, {{0, 0}, {0, 1}}), GraphError);
    EXPECT_THROW(from_edges(2, {{0, 1}, {0, 1}}), GraphError);
}

TEST(PortGraph, GeneratorsHaveExpectedShape) {
    EXPECT_EQ(oriented_ring(7).edge_count(), 7);
    EXPECT_EQ(clique(5).edge_count(), 10);
    EXPECT_EQ(path_graph(6).edge_count(), 5);
    EXPECT_EQ(star(6).edge_count(), 5);
    EXPECT_EQ(star(6).max_degree(), 5);
    EXPECT_EQ(random_tree(9, 3).edge_count(), 8);
    const PortGraph r = oriented_ring(6);
    for (NodeId u = 0; u < 6; ++u) {
        EXPECT_EQ(r.traverse(u, 0).node, (u + 1) % 6);
        EXPECT_EQ(r.traverse(u, 1).node, (u + 5) % 6);
    }
}

TEST(PortGraph, RandomGraphsAreValidAndSeeded) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const PortGraph g = random_connected(8, seed, 300);
        EXPECT_TRUE(ports_symmetric(g));
        EXPECT_EQ(g, random_connected(8, seed, 300));
        const PortGraph h = relabel_ports(g, seed);
        EXPECT_EQ(h.edge_count(), g.edge_count());
        EXPECT_TRUE(ports_symmetric(h));
        for (NodeId u = 0; u < g.size(); ++u) EXPECT_EQ(h.degree(u), g.degree(u));
    }
}

TEST(PortGraph, EdgeIdsAreDenseAndShared) {
    const PortGraph g = clique(5);
    std::set<int> ids;
    for (NodeId u = 0; u < g.size(); ++u)
        for (Port p = 0; p < g.degree(u); ++p) {
            const int e = g.edge_id(u, p);
            const PortTarget t = g.traverse(u, p);
            EXPECT_EQ(e, g.edge_id(t.node, t.entry));
            const auto [a, b] = g.ends(e);
            EXPECT_LT(a, b);
            ids.insert(e);
        }
    EXPECT_EQ(static_cast<int>(ids.size()), g.edge_count());
    EXPECT_EQ(*ids.rbegin(), g.edge_count() - 1);
}

TEST(PortGraph, TextRoundTrip) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const PortGraph g = random_connected(7, seed);
        EXPECT_EQ(parse_graph(write_graph(g)), g);
    }
}

TEST(PortGraph, ParseErrorsCarryLineNumbers) {
    try {
        parse_graph("graph 2\n0: (1,0)\n1: (0,x)\n");
        FAIL() << "expected an error";
    } catch (const std::exception& e) {
        EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
    }
}

TEST(PortGraph, ConnectedClassCountsMatchBruteForce) {
    const auto classes = enumerate_connected_classes(5);
    for (int n = 1; n <= 5; ++n) {
        const auto count = std::count_if(classes.begin(), classes.end(), [&](const PortGraph& g) { return g.size() == n; });
        EXPECT_EQ(count, brute_force_connected_classes(n)) << "n=" << n;
    }
}

TEST(PortGraph, SixNodeClassCount) {
    // brute force is too slow for a unit test here; 112 is the known count
    const auto classes = enumerate_connected_classes(6);
    EXPECT_EQ(std::count_if(classes.begin(), classes.end(), [](const PortGraph& g) { return g.size() == 6; }), 112);
}

TEST(Location, CanonicalEdgePoints) {
    EXPECT_EQ(Location::on_edge(3, 1, make_rational(1, 4)), Location::on_edge(1, 3, make_rational(3, 4)));
    EXPECT_TRUE(Location::on_edge(1, 3, Rational(0)).at_node());
    EXPECT_EQ(Location::on_edge(1, 3, Rational(1)).node, 3);
    EXPECT_FALSE(Location::of_node(2) == Location::on_edge(2, 3, make_rational(1, 2)));
}

TEST(Location, OrderPutsNodesFirst) {
    const Location n5 = Location::of_node(5);
    const Location e = Location::on_edge(0, 1, make_rational(1, 2));
    EXPECT_TRUE(location_less(n5, e));
    EXPECT_FALSE(location_less(e, n5));
    EXPECT_TRUE(location_less(Location::on_edge(0, 1, make_rational(1, 3)), e));
}
