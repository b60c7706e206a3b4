#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hatcheck/game.hpp"
#include "hatcheck/graph.hpp"
#include "hatcheck/guards.hpp"

namespace hatcheck {

enum class Winner { Players, Adversary };

const char* to_string(Winner w) noexcept;

/// One closed branch of an adversary-win search. `branch` is the dotted path
/// of value choices from the root. Either `assignment` is defeated by every
/// strategy in the branch, or the branch was closed by counting: fewer
/// assignments can still be covered (`capacity`) than remain uncovered.
struct RefutationLeaf {
    std::string branch;
    std::optional<HatAssignment> assignment;
    std::uint64_t uncovered = 0;
    std::uint64_t capacity = 0;
};

struct SolveOutcome {
    Winner winner = Winner::Adversary;
    /// Set when the players win; has no defeating assignment.
    std::optional<Strategy> certificate;
    /// First leaves of the refutation, capped by SolverOptions::transcript_limit.
    std::vector<RefutationLeaf> transcript;
    std::uint64_t refutation_leaves = 0;
    std::uint64_t nodes = 0;
};

struct SolverOptions {
    Guards guards;
    /// Fix the first explored entry to color 0 (pair {0,1}) for uniform budgets.
    bool color_symmetry = true;
    std::size_t transcript_limit = 64;
};

/// Exact decision: do the players have a strategy with no defeating
/// assignment? Backtracking over table entries where every assignment must be
/// covered by some vertex's correct guess. Requires at least one vertex.
SolveOutcome players_win(const Graph& g, const ColorBudget& budget, int guess_count,
                         const SolverOptions& options = {});

/// Largest uniform q at which the players win, found by increasing q from 1.
int hg_exact(const Graph& g, const SolverOptions& options = {});
int hg2_exact(const Graph& g, const SolverOptions& options = {});
int hat_guessing_number(const Graph& g, int guess_count, const SolverOptions& options = {});

/// Lexicographically first assignment within `budget` that defeats `strategy`.
/// `budget` must be pointwise at most the strategy's budget.
std::optional<HatAssignment> find_defeating_assignment(const Graph& g, const Strategy& strategy,
                                                       const ColorBudget& budget, const Guards& guards = {});

/// "winner players|adversary" then the certificate or transcript lines
/// "branch <id> defeated-by <assignment>".
std::string to_text(const SolveOutcome& outcome);

}  // namespace hatcheck
