#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hatcheck/graph.hpp"
#include "hatcheck/guards.hpp"
#include "hatcheck/rng.hpp"

namespace hatcheck {

using Color = std::uint32_t;

/// Number of hat colors available to the adversary at each vertex; colors
/// at v are 0..q_v-1.
class ColorBudget {
public:
    ColorBudget() = default;
    explicit ColorBudget(std::vector<Color> per_vertex);
    static ColorBudget uniform(int vertex_count, Color q);

    int size() const noexcept { return static_cast<int>(q_.size()); }
    Color operator[](Vertex v) const { return q_.at(v); }
    const std::vector<Color>& values() const noexcept { return q_; }

    /// Number of assignments, saturating at UINT64_MAX.
    std::uint64_t assignment_count() const noexcept;
    bool is_uniform() const noexcept;
    /// Pointwise >=.
    bool dominates(const ColorBudget& other) const;

    friend bool operator==(const ColorBudget&, const ColorBudget&) = default;

private:
    std::vector<Color> q_;
};

std::string to_text(const ColorBudget& b);

/// One hat color per vertex.
struct HatAssignment {
    std::vector<Color> colors;

    int size() const noexcept { return static_cast<int>(colors.size()); }
    Color operator[](Vertex v) const { return colors.at(v); }
    bool within(const ColorBudget& b) const;

    friend bool operator==(const HatAssignment&, const HatAssignment&) = default;
};

/// Space-separated colors.
std::string to_text(const HatAssignment& a);

/// A vertex's guesses for one neighborhood coloring: one or two distinct colors.
class GuessSet {
public:
    GuessSet() = default;
    explicit GuessSet(Color a) : c_{a, a}, size_(1) {}
    GuessSet(Color a, Color b) : c_{a < b ? a : b, a < b ? b : a}, size_(a == b ? 1 : 2) {}

    int size() const noexcept { return size_; }
    Color operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
    bool contains(Color c) const noexcept { return c_[0] == c || (size_ == 2 && c_[1] == c); }
    Color min() const noexcept { return c_[0]; }
    Color max() const noexcept { return size_ == 2 ? c_[1] : c_[0]; }

    friend bool operator==(const GuessSet&, const GuessSet&) = default;

private:
    std::array<Color, 2> c_{0, 0};
    int size_ = 1;
};

/// Per-vertex total guess tables. The table of v is indexed by the mixed-radix
/// code of the coloring of N(v), neighbors in ascending order with the first
/// neighbor most significant (so index order equals lexicographic order).
class Strategy {
public:
    Strategy() = default;
    /// Every entry guesses {0}. Throws GuardExceeded past guards.strategy_entries.
    Strategy(Graph g, ColorBudget budget, int guess_count, const Guards& guards = {});

    const Graph& graph() const noexcept { return graph_; }
    const ColorBudget& budget() const noexcept { return budget_; }
    int guess_count() const noexcept { return guess_count_; }
    int vertex_count() const noexcept { return graph_.vertex_count(); }

    std::size_t entry_count(Vertex v) const { return entry_counts_.at(v); }
    std::uint64_t total_entries() const noexcept;

    /// Index of the entry used by v under the given full assignment.
    std::size_t entry_index(Vertex v, const HatAssignment& a) const;
    /// Index for an explicit neighborhood coloring (ascending neighbor order).
    std::size_t encode(Vertex v, std::span<const Color> neighborhood) const;
    /// Inverse of encode.
    std::vector<Color> decode(Vertex v, std::size_t index) const;

    GuessSet guesses(Vertex v, std::size_t entry) const;
    void set_guesses(Vertex v, std::size_t entry, GuessSet guesses);

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    Graph graph_;
    ColorBudget budget_;
    int guess_count_ = 1;
    std::vector<std::size_t> entry_counts_;
    // guess_count_ slots per entry; a single guess in a 2-guess table is stored twice.
    std::vector<std::vector<Color>> tables_;
};

/// Total number of distinct guess sets one entry can take at budget q.
std::uint64_t guess_set_count(Color q, int guess_count);
/// Guess set number `index` in the canonical order: singletons {0},...,{q-1},
/// then pairs {0,1},{0,2},...,{q-2,q-1} (pairs only when guess_count == 2).
GuessSet guess_set_at(Color q, int guess_count, std::uint64_t index);

/// Uniform random tables: each slot drawn independently, so 2-guess entries
/// occasionally collapse to one guess.
Strategy random_strategy(const Graph& g, const ColorBudget& b, int guess_count, SplitMix64& rng,
                         const Guards& guards = {});

/// Size of the full strategy space, saturating at UINT64_MAX.
std::uint64_t strategy_space_size(const Graph& g, const ColorBudget& b, int guess_count);

/// Odometer over every strategy in the space, in a fixed order.
class StrategyEnumerator {
public:
    StrategyEnumerator(const Graph& g, const ColorBudget& b, int guess_count, const Guards& guards = {});
    /// Advances to the next strategy; the first call yields the first one.
    bool next();
    const Strategy& current() const noexcept { return current_; }

private:
    Strategy current_;
    std::vector<std::pair<Vertex, std::size_t>> slots_;
    std::vector<std::uint64_t> digits_;
    bool started_ = false;
};

GuessSet guesses_at(const Strategy& s, Vertex v, const HatAssignment& a);
/// Every vertex misses its own color.
bool is_defeating(const Strategy& s, const HatAssignment& a);

/// Lexicographic odometer over all assignments within a budget, vertex 0
/// most significant.
class AssignmentEnumerator {
public:
    /// Throws GuardExceeded when the assignment count exceeds guards.enumeration.
    explicit AssignmentEnumerator(ColorBudget budget, const Guards& guards = {});
    bool next();
    const HatAssignment& current() const noexcept { return current_; }
    std::uint64_t count() const noexcept { return count_; }

private:
    ColorBudget budget_;
    HatAssignment current_;
    std::uint64_t count_ = 0;
    bool started_ = false;
};

std::vector<HatAssignment> enumerate_assignments(const ColorBudget& budget, const Guards& guards = {});

/// Colors pinned on some vertices; unpinned entries are nullopt.
using PartialAssignment = std::vector<std::optional<Color>>;

struct InducedStrategy {
    Strategy strategy;
    std::vector<Vertex> to_parent;
};

/// Strategy on the subgraph induced by `keep`. Every neighbor of a kept vertex
/// that is not kept must be pinned in `pins`; its color is substituted into
/// the kept vertex's table.
InducedStrategy induce_on(const Strategy& s, std::vector<Vertex> keep, const PartialAssignment& pins,
                          const Guards& guards = {});

/// Strategy on G minus the fixed vertices, with fixed neighbors pinned.
InducedStrategy induce_strategy_after_fixing(const Strategy& s, const PartialAssignment& fixed,
                                             const Guards& guards = {});

/// Per-entry union of two 1-guess strategies on the same graph and budget.
Strategy merge_two_guess(const Strategy& a, const Strategy& b);

/// Same tables viewed as a 2-guess strategy.
Strategy as_two_guess(const Strategy& s);

/// The strategy seen by an adversary that only uses colors below `smaller`.
/// Guesses outside the smaller budget can never be right; they are replaced
/// by the other guess of the set when that one is in range, else by 0.
Strategy restrict_budget(const Strategy& s, const ColorBudget& smaller, const Guards& guards = {});

/// "guesses g" then one line "v <index> <guess list>" per table entry.
std::string to_text(const Strategy& s);
/// Reads the format written by to_text for the given graph and budget.
Strategy parse_strategy(std::string_view text, const Graph& g, const ColorBudget& b);

}  // namespace hatcheck
