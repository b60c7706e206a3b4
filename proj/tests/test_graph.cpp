#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "hatcheck/errors.hpp"
#include "hatcheck/graph.hpp"
#include "hatcheck/rng.hpp"

using namespace hatcheck;
using namespace fixtures;

namespace {

ParseError::Kind parse_kind(const std::string& text) {
    try {
        parse_graph(text);
    } catch (const ParseError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no ParseError for: " << text;
    return ParseError::Kind::Malformed;
}

Graph random_graph(SplitMix64& rng, int n, double p) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform(100) < static_cast<std::uint64_t>(p * 100)) g.add_edge(u, v);
    return g;
}

int component_count(const Graph& g) { return static_cast<int>(connected_components(g).size()); }

}  // namespace

TEST(ParseGraph, ReadsHeaderAndEdges) {
    const Graph g = parse_graph("3 2\n0 1\n1 2\n");
    EXPECT_EQ(g.vertex_count(), 3);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(ParseGraph, RejectsBadInput) {
    EXPECT_EQ(parse_kind("2 1\n0 5\n"), ParseError::Kind::VertexOutOfRange);
    EXPECT_EQ(parse_kind("2 1\n1 1\n"), ParseError::Kind::SelfLoop);
    EXPECT_EQ(parse_kind("2 2\n0 1\n1 0\n"), ParseError::Kind::DuplicateEdge);
    EXPECT_EQ(parse_kind("2 2\n0 1\n"), ParseError::Kind::Malformed);
    EXPECT_EQ(parse_kind("x 1\n"), ParseError::Kind::Malformed);
    EXPECT_EQ(parse_kind(""), ParseError::Kind::Malformed);
}

TEST(ParseGraph, TextRoundTrip) {
    const Graph g = bowtie();
    EXPECT_EQ(parse_graph(to_text(g)), g);
}

TEST(Graph, NeighborListsAreSorted) {
    const Graph g = make(4, {{3, 0}, {0, 1}, {2, 0}});
    const auto nb = g.neighbors(0);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    EXPECT_EQ(g.max_degree(), 3);
}

TEST(Graph, InducedSubgraphKeepsOrder) {
    const Subgraph s = induced_subgraph(cactus(), {4, 2, 3});
    EXPECT_EQ(s.to_parent, (std::vector<Vertex>{2, 3, 4}));
    EXPECT_TRUE(s.graph.has_edge(0, 1));
    EXPECT_TRUE(s.graph.has_edge(1, 2));
    EXPECT_FALSE(s.graph.has_edge(0, 2));
}

TEST(Blocks, Bowtie) {
    const auto d = block_decomposition(bowtie());
    EXPECT_EQ(d.blocks, (std::vector<std::vector<Vertex>>{{0, 1, 2}, {2, 3, 4}}));
    EXPECT_EQ(d.cut_vertices, std::vector<Vertex>{2});
    EXPECT_EQ(d.terminal_blocks().size(), 2u);
}

TEST(Blocks, PathThreeHasTwoBridges) {
    const auto d = block_decomposition(path(3));
    EXPECT_EQ(d.blocks.size(), 2u);
    EXPECT_EQ(d.cut_vertices, std::vector<Vertex>{1});
}

TEST(Blocks, SingleEdgeAndIsolatedVertex) {
    EXPECT_EQ(block_decomposition(complete(2)).blocks.size(), 1u);
    const auto d = block_decomposition(make(3, {{0, 1}}));
    EXPECT_EQ(d.blocks, (std::vector<std::vector<Vertex>>{{0, 1}, {2}}));
    EXPECT_TRUE(d.cut_vertices.empty());
}

TEST(Blocks, CactusHasThreeBlocks) {
    const auto d = block_decomposition(cactus());
    EXPECT_EQ(d.blocks.size(), 3u);
    EXPECT_EQ(d.cut_vertices, (std::vector<Vertex>{2, 3}));
}

TEST(Blocks, RandomGraphsAgreeWithDeletionTest) {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform(7));
        const Graph g = random_graph(rng, n, 0.4);
        const auto d = block_decomposition(g);
        // Cut vertices: removal increases the number of components.
        for (Vertex v = 0; v < n; ++v) {
            const Subgraph rest = remove_vertices(g, std::vector<Vertex>{v});
            const bool isolated = g.degree(v) == 0;
            const bool cut = component_count(rest.graph) > component_count(g) - (isolated ? 1 : 0);
            EXPECT_EQ(d.is_cut_vertex(v), cut) << to_text(g) << "vertex " << v;
        }
        // Every edge lies in exactly one block.
        for (const auto& [u, v] : g.edges()) {
            int hits = 0;
            for (const auto& b : d.blocks)
                hits += std::binary_search(b.begin(), b.end(), u) && std::binary_search(b.begin(), b.end(), v);
            EXPECT_EQ(hits, 1) << to_text(g);
        }
    }
}

TEST(Circumference, SmallGraphs) {
    EXPECT_EQ(circumference(complete(3)), 3);
    EXPECT_EQ(circumference(cycle(4)), 4);
    EXPECT_EQ(circumference(complete(4)), 4);
    EXPECT_EQ(circumference(bowtie()), 3);
    EXPECT_EQ(circumference(path(5)), 0);
    EXPECT_EQ(circumference(complete(2)), 0);
    EXPECT_EQ(circumference(Graph(0)), 0);
}

TEST(Circumference, PetersenGraphIsNine) {
    std::vector<Edge> e;
    for (int i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(i, i + 5);
        e.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    EXPECT_EQ(circumference(make(10, e)), 9);
}

TEST(Circumference, GuardTrips) {
    Guards g;
    g.circumference_vertices = 3;
    EXPECT_THROW(circumference(cycle(4), g), GuardExceeded);
}

TEST(TreedepthCertificate, DfsTreeCertifiesGraph) {
    for (const auto& [name, g] : small_connected()) {
        const auto c = dfs_treedepth_certificate(g, 0);
        EXPECT_TRUE(certifies(c.tree, g)) << name;
        EXPECT_EQ(c.depth, c.tree.height() + 1) << name;
    }
    EXPECT_EQ(dfs_treedepth_certificate(complete(3), 0).depth, 3);
    EXPECT_EQ(dfs_treedepth_certificate(path(4), 0).depth, 4);
}

TEST(Closure, PathClosesToCompleteGraph) {
    EXPECT_EQ(closure(RootedTree::path(4)), complete(4));
    EXPECT_EQ(closure(RootedTree::star(3)), star(3));
}

TEST(RootedTree, AncestorsAndHeights) {
    const RootedTree t({-1, 0, 0, 1}, 0);
    EXPECT_EQ(t.height(), 2);
    EXPECT_EQ(t.ancestors(3), (std::vector<Vertex>{0, 1}));
    EXPECT_TRUE(t.is_ancestor(0, 3));
    EXPECT_FALSE(t.is_ancestor(2, 3));
    EXPECT_THROW(RootedTree({-1, 2, 1}, 0), PreconditionError);
}

TEST(GreedyColoring, ClassesAreIndependentAndCover) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = random_graph(rng, 1 + static_cast<int>(rng.uniform(8)), 0.5);
        const auto classes = greedy_proper_coloring(g);
        std::set<Vertex> seen;
        for (const auto& c : classes) {
            EXPECT_TRUE(is_independent_set(g, c));
            seen.insert(c.begin(), c.end());
        }
        EXPECT_EQ(static_cast<int>(seen.size()), g.vertex_count());
        EXPECT_LE(static_cast<int>(classes.size()), g.max_degree() + 1);
    }
}

TEST(TaryTree, EmbeddingsAreValid) {
    const auto e = contains_tary_tree(star(3), 3, 1);
    ASSERT_TRUE(e.has_value());
    const Graph s = star(3);
    for (int child = 1; child <= 3; ++child) EXPECT_TRUE(s.has_edge((*e)[0], (*e)[child]));
    EXPECT_FALSE(contains_tary_tree(cycle(4), 3, 1).has_value());
    EXPECT_TRUE(contains_tary_tree(path(4), 2, 1).has_value());
    EXPECT_FALSE(contains_tary_tree(path(4), 2, 2).has_value());
    EXPECT_EQ(tary_tree_size(2, 2), 7u);
}

TEST(TaryTree, BinaryTreeOfHeightTwoFound) {
    const Graph t = make(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
    const auto e = contains_tary_tree(t, 2, 2);
    ASSERT_TRUE(e.has_value());
    std::set<Vertex> used(e->begin(), e->end());
    EXPECT_EQ(used.size(), 7u);
    for (int i = 0; i < 3; ++i)
        for (int c = 1; c <= 2; ++c) EXPECT_TRUE(t.has_edge((*e)[i], (*e)[2 * i + c]));
}

TEST(Connectivity, Basics) {
    EXPECT_TRUE(is_connected(bowtie()));
    EXPECT_FALSE(is_connected(make(3, {{0, 1}})));
    EXPECT_TRUE(is_two_connected(cycle(4)));
    EXPECT_FALSE(is_two_connected(bowtie()));
    EXPECT_FALSE(is_two_connected(complete(2)));
}
