#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hatcheck/guards.hpp"

namespace hatcheck {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph on vertices 0..n-1. Neighbor lists are kept
/// sorted so every traversal is reproducible.
class Graph {
public:
    Graph() = default;
    explicit Graph(int vertex_count);

    /// Throws PreconditionError on self-loops, duplicates or out-of-range ends.
    static Graph from_edges(int vertex_count, std::span<const Edge> edges);

    void add_edge(Vertex u, Vertex v);

    int vertex_count() const noexcept { return static_cast<int>(adjacency_.size()); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    bool empty() const noexcept { return adjacency_.empty(); }

    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
    int degree(Vertex v) const { return static_cast<int>(adjacency_.at(v).size()); }
    int max_degree() const noexcept;
    bool has_edge(Vertex u, Vertex v) const;

    /// Edges as (u, v) with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
};

/// A subgraph induced on a vertex subset, relabelled 0..k-1 in ascending
/// order of the parent labels. Ascending relabelling preserves the relative
/// order of every neighbor list, which guess tables rely on.
struct Subgraph {
    Graph graph;
    std::vector<Vertex> to_parent;

    /// Parent label -> local label, or -1.
    std::vector<Vertex> from_parent(int parent_vertex_count) const;
};

Subgraph induced_subgraph(const Graph& g, std::vector<Vertex> vertices);
Subgraph remove_vertices(const Graph& g, std::span<const Vertex> removed);

/// Parses "n m" followed by m lines "u v".
Graph parse_graph(std::string_view text);
std::string to_text(const Graph& g);

/// Rooted tree (or the spanning tree of one component) stored as a parent array.
class RootedTree {
public:
    static constexpr Vertex kNoParent = -1;

    RootedTree() = default;
    /// parent[root] must be kNoParent; every other vertex must reach root.
    RootedTree(std::vector<Vertex> parent, Vertex root);

    int vertex_count() const noexcept { return static_cast<int>(parent_.size()); }
    Vertex root() const noexcept { return root_; }
    Vertex parent(Vertex v) const { return parent_.at(v); }
    const std::vector<Vertex>& parents() const noexcept { return parent_; }
    int height_of(Vertex v) const { return height_.at(v); }
    int height() const noexcept;
    const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
    bool is_leaf(Vertex v) const { return children_.at(v).empty(); }
    bool is_ancestor(Vertex ancestor, Vertex v) const;
    /// Proper ancestors of v, root first.
    std::vector<Vertex> ancestors(Vertex v) const;

    /// Path 0-1-...-(n-1) rooted at 0.
    static RootedTree path(int n);
    /// Star rooted at its center 0 with `leaves` leaves.
    static RootedTree star(int leaves);

    friend bool operator==(const RootedTree& a, const RootedTree& b) {
        return a.root_ == b.root_ && a.parent_ == b.parent_;
    }

private:
    std::vector<Vertex> parent_;
    Vertex root_ = 0;
    std::vector<int> height_;
    std::vector<std::vector<Vertex>> children_;
};

std::string to_text(const RootedTree& tree);

struct BlockDecomposition {
    /// Sorted vertex lists, ordered by smallest vertex then lexicographically.
    /// Isolated vertices form singleton blocks.
    std::vector<std::vector<Vertex>> blocks;
    std::vector<Vertex> cut_vertices;
    /// (block index, cut vertex) incidences.
    std::vector<std::pair<int, Vertex>> block_tree;

    /// Blocks containing exactly one cut vertex.
    std::vector<int> terminal_blocks() const;
    bool is_cut_vertex(Vertex v) const;
};

BlockDecomposition block_decomposition(const Graph& g);
std::string to_text(const BlockDecomposition& d);

struct TreedepthCertificate {
    RootedTree tree;
    int depth = 0;
};

/// DFS tree from `root` visiting neighbors in ascending order. The input must
/// be connected; every edge then joins an ancestor-descendant pair.
TreedepthCertificate dfs_treedepth_certificate(const Graph& g, Vertex root);

/// True iff every edge of g joins an ancestor-descendant pair of `tree`.
bool certifies(const RootedTree& tree, const Graph& g);

/// Longest cycle length, 0 when acyclic. Exhaustive; guarded by vertex count.
int circumference(const Graph& g, const Guards& guards = {});

/// Smallest-available-color greedy on ascending vertices; returns the classes.
std::vector<std::vector<Vertex>> greedy_proper_coloring(const Graph& g);

/// Subgraph embedding of the complete t-ary tree of height h. The returned
/// vector maps tree node i (BFS numbering, children of i are t*i+1..t*i+t)
/// to a graph vertex.
std::optional<std::vector<Vertex>> contains_tary_tree(const Graph& g, int t, int h,
                                                      const Guards& guards = {});
/// Vertex count of the complete t-ary tree of height h (saturating).
std::uint64_t tary_tree_size(int t, int h);

/// Ancestor-descendant closure of a rooted tree.
Graph closure(const RootedTree& tree);

bool is_connected(const Graph& g);
std::vector<std::vector<Vertex>> connected_components(const Graph& g);
bool is_independent_set(const Graph& g, std::span<const Vertex> vertices);
/// Connected, at least 3 vertices and no cut vertex.
bool is_two_connected(const Graph& g);

}  // namespace hatcheck
