#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hatcheck/errors.hpp"
#include "hatcheck/solver.hpp"
#include "oracles/naive_game.hpp"

using namespace hatcheck;
using namespace fixtures;

namespace {

naive::Game as_naive(const Graph& g, Color q, int guesses) {
    naive::Game n;
    n.n = g.vertex_count();
    for (const auto& e : g.edges()) n.edges.push_back(e);
    n.q.assign(static_cast<std::size_t>(n.n), static_cast<int>(q));
    n.guesses = guesses;
    return n;
}

// Two guesses on K3 with six colors: write c = 2x + y. Vertex v assumes the
// x-values sum to v mod 3 and names both colors of the implied x.
Strategy k3_six_colors() {
    const Graph g = complete(3);
    Strategy s(g, ColorBudget::uniform(3, 6), 2);
    for (Vertex v = 0; v < 3; ++v)
        for (std::size_t e = 0; e < s.entry_count(v); ++e) {
            const auto seen = s.decode(v, e);
            const int others = static_cast<int>(seen[0] / 2 + seen[1] / 2);
            const Color x = static_cast<Color>(((v - others) % 3 + 3) % 3);
            s.set_guesses(v, e, GuessSet(2 * x, 2 * x + 1));
        }
    return s;
}

// Two guesses on the path a-b-c with five colors. Seeing b = y, a names
// {y, y+1} and c names {3y, 3y+1} (mod 5). For every (a, c) at most two
// values of y fool both ends; b names those.
Strategy p3_five_colors() {
    const Graph g = path(3);
    Strategy s(g, ColorBudget::uniform(3, 5), 2);
    for (Color y = 0; y < 5; ++y) {
        s.set_guesses(0, y, GuessSet(y, (y + 1) % 5));
        s.set_guesses(2, y, GuessSet((3 * y) % 5, (3 * y + 1) % 5));
    }
    for (std::size_t e = 0; e < s.entry_count(1); ++e) {
        const auto seen = s.decode(1, e);
        std::vector<Color> open;
        for (Color y = 0; y < 5; ++y) {
            const bool a_right = seen[0] == y || seen[0] == (y + 1) % 5;
            const bool c_right = seen[1] == (3 * y) % 5 || seen[1] == (3 * y + 1) % 5;
            if (!a_right && !c_right) open.push_back(y);
        }
        EXPECT_LE(open.size(), 2u);
        if (open.size() == 2)
            s.set_guesses(1, e, GuessSet(open[0], open[1]));
        else if (open.size() == 1)
            s.set_guesses(1, e, GuessSet(open[0]));
    }
    return s;
}

}  // namespace

TEST(Solver, CompleteGraphs) {
    EXPECT_EQ(hg_exact(complete(1)), 1);
    EXPECT_EQ(hg_exact(complete(2)), 2);
    EXPECT_EQ(hg_exact(complete(3)), 3);
    EXPECT_EQ(hg_exact(complete(4)), 4);
}

TEST(Solver, SmallNonCompleteGraphs) {
    EXPECT_EQ(hg_exact(path(3)), 2);
    EXPECT_EQ(hg_exact(path(4)), 2);
    EXPECT_EQ(hg_exact(star(3)), 2);
    EXPECT_EQ(hg_exact(cycle(4)), 3);
}

TEST(Solver, TwoGuessSmallValues) {
    EXPECT_EQ(hg2_exact(complete(1)), 2);
    EXPECT_EQ(hg2_exact(complete(2)), 4);
}

TEST(Solver, CertificatesHaveNoDefeatingAssignment) {
    for (const auto& [name, g] : small_connected()) {
        if (g.vertex_count() > 3) continue;
        for (int gc = 1; gc <= 2; ++gc)
            for (Color q = 1; q <= 3; ++q) {
                const ColorBudget b = ColorBudget::uniform(g.vertex_count(), q);
                const SolveOutcome o = players_win(g, b, gc);
                if (o.winner == Winner::Players) {
                    ASSERT_TRUE(o.certificate.has_value());
                    EXPECT_TRUE(naive::strategy_wins(*o.certificate, b)) << name << " q=" << q;
                } else {
                    EXPECT_FALSE(o.transcript.empty());
                }
            }
    }
}

TEST(Solver, AgreesWithNaiveOracleOnTinyGames) {
    for (const auto& [name, g] : small_connected()) {
        if (g.vertex_count() > 3 || name == "K3") continue;  // K3 runs in the acceptance suite
        for (int gc = 1; gc <= 2; ++gc)
            for (Color q = 1; q <= 3; ++q)
                EXPECT_EQ(players_win(g, ColorBudget::uniform(g.vertex_count(), q), gc).winner == Winner::Players,
                          naive::players_win(as_naive(g, q, gc)))
                    << name << " q=" << q << " guesses=" << gc;
    }
}

TEST(Solver, HeterogeneousBudget) {
    // A vertex with a single color always guesses right.
    EXPECT_EQ(players_win(complete(2), ColorBudget({1, 5}), 1).winner, Winner::Players);
    EXPECT_EQ(players_win(path(3), ColorBudget({2, 1, 2}), 1).winner, Winner::Players);
    EXPECT_EQ(players_win(complete(2), ColorBudget({2, 2}), 1).winner, Winner::Players);
    EXPECT_EQ(players_win(complete(2), ColorBudget({2, 3}), 2).winner, Winner::Players);
    EXPECT_EQ(players_win(complete(2), ColorBudget({2, 3}), 1).winner, Winner::Adversary);
}

TEST(Solver, SixColorsOnTriangleWithTwoGuesses) {
    const Strategy s = k3_six_colors();
    EXPECT_TRUE(naive::strategy_wins(s, s.budget()));
    EXPECT_FALSE(find_defeating_assignment(s.graph(), s, s.budget()).has_value());
    // 3 vertices * 49 entries * 2 guesses cover fewer than 7^3 assignments.
    EXPECT_EQ(players_win(complete(3), ColorBudget::uniform(3, 7), 2).winner, Winner::Adversary);
}

TEST(Solver, FiveColorsOnPathWithTwoGuesses) {
    const Strategy s = p3_five_colors();
    EXPECT_TRUE(naive::strategy_wins(s, s.budget()));
    EXPECT_EQ(players_win(path(3), ColorBudget::uniform(3, 6), 2).winner, Winner::Adversary);
}

TEST(Solver, FindDefeatingAssignmentIsLexicographicFirst) {
    const Strategy s(complete(2), ColorBudget::uniform(2, 3), 1);
    const auto a = find_defeating_assignment(s.graph(), s, s.budget());
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(*a, (HatAssignment{{1, 1}}));
    const auto b = find_defeating_assignment(s.graph(), s, ColorBudget::uniform(2, 1));
    EXPECT_FALSE(b.has_value());
}

TEST(Solver, NodeGuardIsReported) {
    SolverOptions opt;
    opt.guards.solver_nodes = 10;
    EXPECT_THROW(players_win(cycle(4), ColorBudget::uniform(4, 3), 1, opt), GuardExceeded);
    opt.guards = Guards{};
    opt.guards.assignments = 10;
    EXPECT_THROW(players_win(complete(3), ColorBudget::uniform(3, 3), 1, opt), GuardExceeded);
}

TEST(Solver, SymmetryBreakingDoesNotChangeAnswers) {
    SolverOptions plain;
    plain.color_symmetry = false;
    for (const auto& [name, g] : small_connected()) {
        if (g.vertex_count() > 3) continue;
        for (Color q = 1; q <= 3; ++q) {
            const ColorBudget b = ColorBudget::uniform(g.vertex_count(), q);
            EXPECT_EQ(players_win(g, b, 1).winner, players_win(g, b, 1, plain).winner) << name << " q=" << q;
        }
    }
}

TEST(Solver, TranscriptText) {
    const SolveOutcome o = players_win(complete(1), ColorBudget({3}), 2);
    EXPECT_EQ(o.winner, Winner::Adversary);
    const std::string t = to_text(o);
    EXPECT_EQ(t.rfind("winner adversary", 0), 0u);
    EXPECT_NE(t.find("branch"), std::string::npos);
}
