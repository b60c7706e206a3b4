#include "hatcheck/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "hatcheck/errors.hpp"

namespace hatcheck {

Graph::Graph(int vertex_count) {
    if (vertex_count < 0) throw PreconditionError("negative vertex count");
    adjacency_.resize(static_cast<std::size_t>(vertex_count));
}

Graph Graph::from_edges(int vertex_count, std::span<const Edge> edges) {
    Graph g(vertex_count);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

void Graph::add_edge(Vertex u, Vertex v) {
    const int n = vertex_count();
    if (u < 0 || v < 0 || u >= n || v >= n)
        throw PreconditionError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) throw PreconditionError("self-loop at " + std::to_string(u));
    auto& nu = adjacency_[u];
    const auto pos = std::lower_bound(nu.begin(), nu.end(), v);
    if (pos != nu.end() && *pos == v)
        throw PreconditionError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    nu.insert(pos, v);
    auto& nv = adjacency_[v];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
    ++edge_count_;
}

int Graph::max_degree() const noexcept {
    int best = 0;
    for (const auto& nb : adjacency_) best = std::max(best, static_cast<int>(nb.size()));
    return best;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    const auto& nu = adjacency_.at(u);
    return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < vertex_count(); ++u)
        for (Vertex v : adjacency_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::vector<Vertex> Subgraph::from_parent(int parent_vertex_count) const {
    std::vector<Vertex> map(static_cast<std::size_t>(parent_vertex_count), -1);
    for (std::size_t i = 0; i < to_parent.size(); ++i) map[to_parent[i]] = static_cast<Vertex>(i);
    return map;
}

Subgraph induced_subgraph(const Graph& g, std::vector<Vertex> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    Subgraph sub{Graph(static_cast<int>(vertices.size())), std::move(vertices)};
    const auto local = sub.from_parent(g.vertex_count());
    for (std::size_t i = 0; i < sub.to_parent.size(); ++i)
        for (Vertex w : g.neighbors(sub.to_parent[i]))
            if (local[w] > static_cast<Vertex>(i)) sub.graph.add_edge(static_cast<Vertex>(i), local[w]);
    return sub;
}

Subgraph remove_vertices(const Graph& g, std::span<const Vertex> removed) {
    std::vector<char> gone(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex v : removed) gone.at(v) = 1;
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (!gone[v]) keep.push_back(v);
    return induced_subgraph(g, std::move(keep));
}

namespace {

struct LineReader {
    std::string_view text;
    std::size_t line_no = 0;

    bool next(std::string_view& line) {
        while (!text.empty()) {
            const auto nl = text.find('\n');
            line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.find_first_not_of(" \t") != std::string_view::npos) return true;
        }
        return false;
    }
};

std::vector<long long> parse_ints(std::string_view line, std::size_t line_no) {
    std::vector<long long> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i == line.size()) break;
        long long value = 0;
        const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
        const std::size_t used = static_cast<std::size_t>(ptr - (line.data() + i));
        if (ec != std::errc{} || used == 0)
            throw ParseError(ParseError::Kind::Malformed, line_no, "expected integer in '" + std::string(line) + "'");
        i += used;
        if (i < line.size() && line[i] != ' ' && line[i] != '\t')
            throw ParseError(ParseError::Kind::Malformed, line_no, "unexpected character in '" + std::string(line) + "'");
        out.push_back(value);
    }
    return out;
}

}  // namespace

Graph parse_graph(std::string_view text) {
    LineReader reader{text};
    std::string_view line;
    if (!reader.next(line)) throw ParseError(ParseError::Kind::Malformed, 1, "missing header 'n m'");
    const auto header = parse_ints(line, reader.line_no);
    if (header.size() != 2 || header[0] < 0 || header[1] < 0)
        throw ParseError(ParseError::Kind::Malformed, reader.line_no, "header must be 'n m' with n, m >= 0");
    const long long n = header[0];
    const long long m = header[1];
    if (n > 1'000'000) throw ParseError(ParseError::Kind::Malformed, reader.line_no, "vertex count too large");

    Graph g(static_cast<int>(n));
    for (long long e = 0; e < m; ++e) {
        if (!reader.next(line))
            throw ParseError(ParseError::Kind::Malformed, reader.line_no + 1,
                             "expected " + std::to_string(m) + " edges, found " + std::to_string(e));
        const auto uv = parse_ints(line, reader.line_no);
        if (uv.size() != 2) throw ParseError(ParseError::Kind::Malformed, reader.line_no, "edge line must be 'u v'");
        const long long u = uv[0];
        const long long v = uv[1];
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError(ParseError::Kind::VertexOutOfRange, reader.line_no,
                             "vertex out of range in '" + std::string(line) + "'");
        if (u == v) throw ParseError(ParseError::Kind::SelfLoop, reader.line_no, "self-loop at " + std::to_string(u));
        if (g.has_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)))
            throw ParseError(ParseError::Kind::DuplicateEdge, reader.line_no,
                             "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
        g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    if (reader.next(line)) throw ParseError(ParseError::Kind::Malformed, reader.line_no, "trailing content after edges");
    return g;
}

std::string to_text(const Graph& g) {
    std::ostringstream out;
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// RootedTree

RootedTree::RootedTree(std::vector<Vertex> parent, Vertex root) : parent_(std::move(parent)), root_(root) {
    const int n = vertex_count();
    if (root < 0 || root >= n) throw PreconditionError("root out of range");
    if (parent_[root] != kNoParent) throw PreconditionError("root must not have a parent");
    children_.assign(static_cast<std::size_t>(n), {});
    for (Vertex v = 0; v < n; ++v) {
        if (v == root) continue;
        const Vertex p = parent_[v];
        if (p < 0 || p >= n || p == v) throw PreconditionError("bad parent for vertex " + std::to_string(v));
        children_[p].push_back(v);
    }
    // BFS from the root both computes heights and proves connectivity/acyclicity.
    height_.assign(static_cast<std::size_t>(n), -1);
    std::vector<Vertex> queue{root};
    height_[root] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (Vertex c : children_[queue[i]]) {
            height_[c] = height_[queue[i]] + 1;
            queue.push_back(c);
        }
    if (static_cast<int>(queue.size()) != n) throw PreconditionError("parent links do not form a tree");
}

int RootedTree::height() const noexcept {
    return height_.empty() ? 0 : *std::max_element(height_.begin(), height_.end());
}

bool RootedTree::is_ancestor(Vertex ancestor, Vertex v) const {
    for (Vertex p = parent_.at(v); p != kNoParent; p = parent_[p])
        if (p == ancestor) return true;
    return false;
}

std::vector<Vertex> RootedTree::ancestors(Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex p = parent_.at(v); p != kNoParent; p = parent_[p]) out.push_back(p);
    std::reverse(out.begin(), out.end());
    return out;
}

RootedTree RootedTree::path(int n) {
    std::vector<Vertex> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[i] = i - 1;
    return RootedTree(std::move(parent), 0);
}

RootedTree RootedTree::star(int leaves) {
    std::vector<Vertex> parent(static_cast<std::size_t>(leaves + 1), 0);
    parent[0] = kNoParent;
    return RootedTree(std::move(parent), 0);
}

std::string to_text(const RootedTree& tree) {
    std::ostringstream out;
    out << "root " << tree.root() << "\nparent";
    for (Vertex p : tree.parents()) out << ' ' << p;
    out << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Blocks

namespace {

class BlockFinder {
public:
    explicit BlockFinder(const Graph& g)
        : g_(g), disc_(g.vertex_count(), -1), low_(g.vertex_count(), 0) {}

    std::vector<std::vector<Vertex>> run() {
        for (Vertex v = 0; v < g_.vertex_count(); ++v) {
            if (disc_[v] != -1) continue;
            if (g_.degree(v) == 0) {
                disc_[v] = timer_++;
                blocks_.push_back({v});
                continue;
            }
            visit(v, -1);
        }
        return std::move(blocks_);
    }

private:
    void visit(Vertex v, Vertex parent) {
        disc_[v] = low_[v] = timer_++;
        for (Vertex w : g_.neighbors(v)) {
            if (w == parent) continue;
            if (disc_[w] == -1) {
                stack_.emplace_back(v, w);
                visit(w, v);
                low_[v] = std::min(low_[v], low_[w]);
                if (low_[w] >= disc_[v]) pop_block(v, w);
            } else if (disc_[w] < disc_[v]) {
                stack_.emplace_back(v, w);
                low_[v] = std::min(low_[v], disc_[w]);
            }
        }
    }

    void pop_block(Vertex v, Vertex w) {
        std::vector<Vertex> block;
        while (true) {
            const Edge e = stack_.back();
            stack_.pop_back();
            block.push_back(e.first);
            block.push_back(e.second);
            if (e == Edge{v, w}) break;
        }
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        blocks_.push_back(std::move(block));
    }

    const Graph& g_;
    std::vector<int> disc_;
    std::vector<int> low_;
    int timer_ = 0;
    std::vector<Edge> stack_;
    std::vector<std::vector<Vertex>> blocks_;
};

}  // namespace

BlockDecomposition block_decomposition(const Graph& g) {
    BlockDecomposition d;
    d.blocks = BlockFinder(g).run();
    std::sort(d.blocks.begin(), d.blocks.end());

    std::vector<int> membership(static_cast<std::size_t>(g.vertex_count()), 0);
    for (const auto& b : d.blocks)
        for (Vertex v : b) ++membership[v];
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (membership[v] > 1) d.cut_vertices.push_back(v);
    for (int i = 0; i < static_cast<int>(d.blocks.size()); ++i)
        for (Vertex v : d.blocks[i])
            if (membership[v] > 1) d.block_tree.emplace_back(i, v);
    return d;
}

std::vector<int> BlockDecomposition::terminal_blocks() const {
    std::vector<int> count(blocks.size(), 0);
    for (const auto& [b, v] : block_tree) ++count[b];
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(blocks.size()); ++i)
        if (count[i] == 1) out.push_back(i);
    return out;
}

bool BlockDecomposition::is_cut_vertex(Vertex v) const {
    return std::binary_search(cut_vertices.begin(), cut_vertices.end(), v);
}

std::string to_text(const BlockDecomposition& d) {
    std::ostringstream out;
    out << "blocks " << d.blocks.size() << '\n';
    for (const auto& b : d.blocks) {
        out << "block";
        for (Vertex v : b) out << ' ' << v;
        out << '\n';
    }
    out << "cut_vertices";
    for (Vertex v : d.cut_vertices) out << ' ' << v;
    out << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// DFS certificate, closure

TreedepthCertificate dfs_treedepth_certificate(const Graph& g, Vertex root) {
    const int n = g.vertex_count();
    if (root < 0 || root >= n) throw PreconditionError("root out of range");
    std::vector<Vertex> parent(static_cast<std::size_t>(n), RootedTree::kNoParent);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    // Explicit stack of (vertex, next neighbor position) reproduces recursive DFS order.
    std::vector<std::pair<Vertex, std::size_t>> stack{{root, 0}};
    seen[root] = 1;
    int visited = 1;
    while (!stack.empty()) {
        auto& [v, pos] = stack.back();
        const auto nb = g.neighbors(v);
        if (pos == nb.size()) {
            stack.pop_back();
            continue;
        }
        const Vertex w = nb[pos++];
        if (seen[w]) continue;
        seen[w] = 1;
        parent[w] = v;
        ++visited;
        stack.emplace_back(w, 0);
    }
    if (visited != n) throw PreconditionError("dfs_treedepth_certificate requires a connected graph");
    RootedTree tree(std::move(parent), root);
    const int depth = tree.height() + 1;
    return {std::move(tree), depth};
}

bool certifies(const RootedTree& tree, const Graph& g) {
    if (tree.vertex_count() != g.vertex_count()) return false;
    for (const auto& [u, v] : g.edges())
        if (!tree.is_ancestor(u, v) && !tree.is_ancestor(v, u)) return false;
    return true;
}

Graph closure(const RootedTree& tree) {
    Graph g(tree.vertex_count());
    for (Vertex v = 0; v < tree.vertex_count(); ++v)
        for (Vertex a : tree.ancestors(v)) g.add_edge(a, v);
    return g;
}

// ---------------------------------------------------------------------------
// Circumference

namespace {

struct CycleSearch {
    const Graph& g;
    Vertex start = 0;
    std::vector<char> on_path;
    int best = 0;

    void extend(Vertex v, int length) {
        for (Vertex w : g.neighbors(v)) {
            if (w == start && length >= 3) best = std::max(best, length);
            if (w <= start || on_path[w]) continue;
            on_path[w] = 1;
            extend(w, length + 1);
            on_path[w] = 0;
        }
    }
};

}  // namespace

int circumference(const Graph& g, const Guards& guards) {
    if (static_cast<std::uint64_t>(g.vertex_count()) > guards.circumference_vertices)
        throw GuardExceeded("circumference", "graph has " + std::to_string(g.vertex_count()) +
                                                 " vertices, guard is " +
                                                 std::to_string(guards.circumference_vertices));
    CycleSearch search{g, 0, std::vector<char>(static_cast<std::size_t>(g.vertex_count()), 0), 0};
    // Each cycle is found from its smallest vertex.
    for (Vertex s = 0; s < g.vertex_count(); ++s) {
        search.start = s;
        search.on_path[s] = 1;
        search.extend(s, 1);
        search.on_path[s] = 0;
        if (search.best == g.vertex_count()) break;
    }
    return search.best;
}

// ---------------------------------------------------------------------------
// Coloring

std::vector<std::vector<Vertex>> greedy_proper_coloring(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<Vertex>> classes;
    std::vector<char> used;
    for (Vertex v = 0; v < n; ++v) {
        used.assign(static_cast<std::size_t>(g.degree(v)) + 1, 0);
        for (Vertex w : g.neighbors(v))
            if (color[w] >= 0 && color[w] <= g.degree(v)) used[color[w]] = 1;
        int c = 0;
        while (used[c]) ++c;
        color[v] = c;
        if (c == static_cast<int>(classes.size())) classes.emplace_back();
        classes[c].push_back(v);
    }
    return classes;
}

// ---------------------------------------------------------------------------
// t-ary tree embedding

std::uint64_t tary_tree_size(int t, int h) {
    std::uint64_t total = 0;
    std::uint64_t level = 1;
    constexpr std::uint64_t cap = std::uint64_t{1} << 62;
    for (int i = 0; i <= h; ++i) {
        total += level;
        if (total >= cap) return cap;
        level = level > cap / static_cast<std::uint64_t>(t) ? cap : level * static_cast<std::uint64_t>(t);
    }
    return total;
}

namespace {

class TreeEmbedder {
public:
    TreeEmbedder(const Graph& g, int t, std::size_t size, std::uint64_t step_limit)
        : g_(g), t_(t), map_(size, -1), used_(static_cast<std::size_t>(g.vertex_count()), 0), limit_(step_limit) {}

    std::optional<std::vector<Vertex>> run() {
        for (Vertex r = 0; r < g_.vertex_count(); ++r) {
            if (g_.degree(r) < (map_.size() > 1 ? t_ : 0)) continue;
            map_[0] = r;
            used_[r] = 1;
            if (place(1)) return map_;
            used_[r] = 0;
        }
        return std::nullopt;
    }

private:
    // Nodes are placed in BFS order; siblings are interchangeable, so their
    // images are taken in increasing order.
    bool place(std::size_t node) {
        if (node == map_.size()) return true;
        if (++steps_ > limit_)
            throw GuardExceeded("embedding", "t-ary tree search exceeded " + std::to_string(limit_) + " steps");
        const std::size_t parent = (node - 1) / static_cast<std::size_t>(t_);
        const bool first_sibling = (node - 1) % static_cast<std::size_t>(t_) == 0;
        const Vertex floor = first_sibling ? -1 : map_[node - 1];
        const bool needs_children = node * static_cast<std::size_t>(t_) + 1 < map_.size();
        for (Vertex w : g_.neighbors(map_[parent])) {
            if (w <= floor || used_[w]) continue;
            if (needs_children && g_.degree(w) < t_ + 1) continue;
            map_[node] = w;
            used_[w] = 1;
            if (place(node + 1)) return true;
            used_[w] = 0;
        }
        map_[node] = -1;
        return false;
    }

    const Graph& g_;
    int t_;
    std::vector<Vertex> map_;
    std::vector<char> used_;
    std::uint64_t limit_;
    std::uint64_t steps_ = 0;
};

}  // namespace

std::optional<std::vector<Vertex>> contains_tary_tree(const Graph& g, int t, int h, const Guards& guards) {
    if (t < 2) throw PreconditionError("contains_tary_tree requires t >= 2");
    if (h < 1) throw PreconditionError("contains_tary_tree requires h >= 1");
    const std::uint64_t size = tary_tree_size(t, h);
    if (size > static_cast<std::uint64_t>(g.vertex_count())) return std::nullopt;
    return TreeEmbedder(g, t, static_cast<std::size_t>(size), guards.tree_embedding_nodes).run();
}

// ---------------------------------------------------------------------------
// Misc structure

std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<Vertex>> out;
    for (Vertex s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<Vertex> comp{s};
        seen[s] = 1;
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (Vertex w : g.neighbors(comp[i]))
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

bool is_independent_set(const Graph& g, std::span<const Vertex> vertices) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (vertices[i] == vertices[j] || g.has_edge(vertices[i], vertices[j])) return false;
    return true;
}

bool is_two_connected(const Graph& g) {
    if (g.vertex_count() < 3 || !is_connected(g)) return false;
    return block_decomposition(g).blocks.size() == 1;
}

}  // namespace hatcheck
