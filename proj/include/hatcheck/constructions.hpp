#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hatcheck/bounds.hpp"
#include "hatcheck/game.hpp"
#include "hatcheck/graph.hpp"
#include "hatcheck/guards.hpp"

namespace hatcheck {

/// Lines describing each step of one defeat, indented by recursion depth.
using Trace = std::vector<std::string>;

/// An adversary that answers any strategy on `graph()` with an assignment
/// within `budget()` that defeats it. Immutable once built.
class AdversaryOracle {
public:
    AdversaryOracle(Graph g, ColorBudget budget, int guess_count, std::string name);
    virtual ~AdversaryOracle() = default;

    const Graph& graph() const noexcept { return graph_; }
    const ColorBudget& budget() const noexcept { return budget_; }
    int guess_count() const noexcept { return guess_count_; }
    const std::string& name() const noexcept { return name_; }

    /// Accepts strategies whose budget dominates budget() (extra colors are
    /// never used) and, for 2-guess oracles, 1-guess strategies as well.
    HatAssignment defeat(const Strategy& s, Trace* trace = nullptr, int depth = 0) const;

    /// Indented outline of the construction.
    virtual void describe(std::vector<std::string>& out, int depth = 0) const;

protected:
    /// `s` has exactly budget() and guess_count().
    virtual HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const = 0;
    static void note(Trace* trace, int depth, const std::string& line);

private:
    Graph graph_;
    ColorBudget budget_;
    int guess_count_;
    std::string name_;
};

using OraclePtr = std::shared_ptr<const AdversaryOracle>;

std::string describe(const AdversaryOracle& oracle);

/// Searches assignments in lexicographic order; a strategy with no defeating
/// assignment raises PremiseViolation carrying the strategy as witness.
OraclePtr oracle_exhaustive(const Graph& g, const ColorBudget& budget, int guess_count, const Guards& guards = {});

/// Independent set U with deg(u) <= r; `sub` plays on g minus U with uniform
/// budget ell and one guess. The result has uniform budget ell^r + 1.
OraclePtr oracle_lemma_is(const Graph& g, std::vector<Vertex> u_set, int r, Color ell, OraclePtr sub);

/// `sub2` plays 2-guess on g minus v at uniform ell + 1. The result has one
/// guess, budget max(two_colors) + 1 at v and ell + 1 elsewhere, and always
/// colors v from two_colors.
OraclePtr oracle_lemma_two_at_v(const Graph& g, Vertex v, std::pair<Color, Color> two_colors, Color ell,
                                OraclePtr sub2);

/// Optional ingredients of oracle_lemma_rus. Without `g1`, the set of
/// colorings of G1 that fool every vertex but v is enumerated. With it, the
/// colorings are obtained by repeatedly asking `g1` (one guess, on the
/// subgraph induced by g1_vertices) to defeat strategies that differ only at v.
struct RusParts {
    OraclePtr g1;
    /// 2-guess oracle on G2 minus v at uniform ell + 1; exhaustive if unset.
    OraclePtr g2_minus_v;
    Guards guards;
};

/// g = G1 union G2 sharing only v, with no edge between G1 - v and G2 - v.
/// Uniform budget ell + 1, one guess.
OraclePtr oracle_lemma_rus(const Graph& g, Vertex v, std::vector<Vertex> g1_vertices, std::vector<Vertex> g2_vertices,
                           Color ell, RusParts parts = {});

/// Builds a 2-guess oracle for one block (given as its own graph) at uniform
/// budget ell + 1.
using BlockOracleFactory = std::function<OraclePtr(const Graph& block, Color ell)>;

BlockOracleFactory exhaustive_block_factory(const Guards& guards = {});

/// Uniform budget ell + 1, one guess, assembled block by block.
OraclePtr oracle_lemma_blocks(const Graph& g, Color ell, BlockOracleFactory factory = exhaustive_block_factory());

/// Which leaf the closure oracle peels first among the current leaves.
enum class LeafOrder { Smallest, Largest };

/// 2-guess oracle on closure(tree) with budget a_{height(v)+1} at v.
OraclePtr oracle_closure(const RootedTree& tree, LeafOrder order = LeafOrder::Smallest, const Guards& guards = {});

/// 2-guess oracle on `g` at uniform `colors`, where g is a subgraph of
/// closure(tree) on the same vertices and colors >= a_{height(tree)+1}.
OraclePtr oracle_closure_cover(const Graph& g, const RootedTree& tree, Color colors, const Guards& guards = {});

enum class CircDepth {
    /// d = floor(c^2 / 2), or 2 for acyclic graphs.
    Circumference,
    /// d = the deepest DFS certificate over all blocks.
    Certificate,
};

struct CircResult {
    OraclePtr oracle;
    int circumference = 0;
    /// False when the circumference search hit its guard; the vertex count is
    /// then used in its place.
    bool circumference_exact = true;
    std::uint64_t depth = 0;
    /// a_depth; the oracle's uniform budget when it fits in a Color.
    BigBound bound;
    /// circ_bound(circumference) when circumference >= 3.
    std::optional<BigBound> formula;
    std::optional<std::string> guard_note;
};

CircResult oracle_theorem_circ(const Graph& g, CircDepth mode = CircDepth::Circumference, const Guards& guards = {});

struct TaryOptions {
    /// Uniform budget of the height-1 exhaustive base; ceil(e t) when unset.
    std::optional<Color> base_colors;
    Guards guards;
};

struct TaryResult {
    OraclePtr oracle;
    BigBound bound;
    std::optional<std::string> guard_note;
};

/// Requires that g contain no complete t-ary tree of height h; otherwise
/// raises PremiseViolation whose witness is the embedding.
TaryResult oracle_theorem_tary(const Graph& g, int t, int h, const TaryOptions& options = {});

}  // namespace hatcheck
