#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "hatcheck/errors.hpp"
#include "hatcheck/game.hpp"

using namespace hatcheck;
using namespace fixtures;

namespace {

// Winkler's strategy on K2 with two colors: vertex 0 guesses the color it
// sees, vertex 1 guesses the other one.
Strategy winkler() {
    Strategy s(complete(2), ColorBudget::uniform(2, 2), 1);
    s.set_guesses(0, 0, GuessSet(0));
    s.set_guesses(0, 1, GuessSet(1));
    s.set_guesses(1, 0, GuessSet(1));
    s.set_guesses(1, 1, GuessSet(0));
    return s;
}

HatAssignment random_assignment(SplitMix64& rng, const ColorBudget& b) {
    HatAssignment a;
    for (Vertex v = 0; v < b.size(); ++v) a.colors.push_back(static_cast<Color>(rng.uniform(b[v])));
    return a;
}

}  // namespace

TEST(ColorBudget, CountsAndDominance) {
    const ColorBudget b({2, 3, 4});
    EXPECT_EQ(b.assignment_count(), 24u);
    EXPECT_FALSE(b.is_uniform());
    EXPECT_TRUE(ColorBudget({2, 3, 5}).dominates(b));
    EXPECT_FALSE(ColorBudget({2, 2, 5}).dominates(b));
    EXPECT_EQ(ColorBudget::uniform(64, 2).assignment_count(), ~std::uint64_t{0});
}

TEST(GuessSet, NormalizesOrder) {
    EXPECT_EQ(GuessSet(3, 1), GuessSet(1, 3));
    EXPECT_EQ(GuessSet(2, 2).size(), 1);
    EXPECT_TRUE(GuessSet(1, 3).contains(3));
    EXPECT_FALSE(GuessSet(1, 3).contains(2));
}

TEST(GuessSets, CanonicalOrder) {
    EXPECT_EQ(guess_set_count(3, 1), 3u);
    EXPECT_EQ(guess_set_count(3, 2), 6u);
    EXPECT_EQ(guess_set_at(3, 2, 0), GuessSet(0));
    EXPECT_EQ(guess_set_at(3, 2, 3), GuessSet(0, 1));
    EXPECT_EQ(guess_set_at(3, 2, 5), GuessSet(1, 2));
}

TEST(Strategy, EncodingMatchesLayout) {
    const Graph g = star(2);
    const ColorBudget b({3, 2, 5});
    const Strategy s(g, b, 1);
    EXPECT_EQ(s.entry_count(0), 10u);
    EXPECT_EQ(s.entry_count(1), 3u);
    SplitMix64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const HatAssignment a = random_assignment(rng, b);
        for (Vertex v = 0; v < 3; ++v) {
            EXPECT_EQ(s.entry_index(v, a), naive::table_index(g, b, v, a));
            const auto idx = s.entry_index(v, a);
            EXPECT_EQ(s.encode(v, s.decode(v, idx)), idx);
        }
    }
}

TEST(Strategy, RejectsOutOfRangeGuesses) {
    Strategy s(complete(2), ColorBudget::uniform(2, 2), 1);
    EXPECT_ANY_THROW(s.set_guesses(0, 0, GuessSet(2)));
    EXPECT_ANY_THROW(s.set_guesses(0, 0, GuessSet(0, 1)));
}

TEST(Strategy, TableGuard) {
    Guards g;
    g.strategy_entries = 10;
    EXPECT_THROW(Strategy(complete(3), ColorBudget::uniform(3, 3), 1, g), GuardExceeded);
}

TEST(Game, WinklerStrategyWinsOnK2) {
    const Strategy s = winkler();
    for (const auto& a : enumerate_assignments(s.budget())) {
        EXPECT_FALSE(is_defeating(s, a)) << to_text(a);
        EXPECT_FALSE(naive::all_wrong(s, a));
    }
}

TEST(Game, ConstantStrategyLoses) {
    const Strategy s(complete(2), ColorBudget::uniform(2, 2), 1);
    EXPECT_TRUE(is_defeating(s, HatAssignment{{1, 1}}));
    EXPECT_FALSE(is_defeating(s, HatAssignment{{0, 1}}));
}

TEST(Game, StrategySpaceAndEnumerator) {
    EXPECT_EQ(strategy_space_size(complete(1), ColorBudget({3}), 2), 6u);
    EXPECT_EQ(strategy_space_size(complete(2), ColorBudget::uniform(2, 2), 1), 16u);
    StrategyEnumerator it(complete(2), ColorBudget({2, 3}), 1);
    std::set<std::string> seen;
    while (it.next()) seen.insert(to_text(it.current()));
    EXPECT_EQ(seen.size(), strategy_space_size(complete(2), ColorBudget({2, 3}), 1));
}

TEST(Game, AssignmentEnumeratorIsLexicographic) {
    const auto all = enumerate_assignments(ColorBudget({2, 3}));
    ASSERT_EQ(all.size(), 6u);
    EXPECT_EQ(all[0], (HatAssignment{{0, 0}}));
    EXPECT_EQ(all[1], (HatAssignment{{0, 1}}));
    EXPECT_EQ(all[5], (HatAssignment{{1, 2}}));
    Guards g;
    g.enumeration = 5;
    EXPECT_THROW(enumerate_assignments(ColorBudget({2, 3}), g), GuardExceeded);
}

TEST(Game, RestrictBudgetDefeatsCarryOver) {
    SplitMix64 rng(5);
    const Graph g = paw();
    const ColorBudget big = ColorBudget::uniform(4, 5);
    const ColorBudget small({3, 2, 4, 3});
    for (int gc = 1; gc <= 2; ++gc)
        for (int i = 0; i < 50; ++i) {
            const Strategy s = random_strategy(g, big, gc, rng);
            const Strategy r = restrict_budget(s, small);
            EXPECT_EQ(r.budget(), small);
            for (int j = 0; j < 20; ++j) {
                const HatAssignment a = random_assignment(rng, small);
                // Filling dropped guesses can only make r stronger.
                if (naive::all_wrong(r, a)) {
                    EXPECT_TRUE(naive::all_wrong(s, a));
                }
            }
        }
}

TEST(Game, InducedStrategyMatchesPinnedColors) {
    SplitMix64 rng(9);
    const Graph g = bowtie();
    const ColorBudget b = ColorBudget::uniform(5, 3);
    for (int i = 0; i < 50; ++i) {
        const Strategy s = random_strategy(g, b, 2, rng);
        const HatAssignment a = random_assignment(rng, b);
        PartialAssignment fixed(5);
        fixed[2] = a[2];
        const InducedStrategy ind = induce_strategy_after_fixing(s, fixed);
        ASSERT_EQ(ind.to_parent, (std::vector<Vertex>{0, 1, 3, 4}));
        HatAssignment local;
        for (Vertex p : ind.to_parent) local.colors.push_back(a[p]);
        for (Vertex v = 0; v < 4; ++v)
            EXPECT_EQ(guesses_at(ind.strategy, v, local), guesses_at(s, ind.to_parent[v], a));
    }
}

TEST(Game, MergeTwoGuessUnitesEntries) {
    SplitMix64 rng(2);
    const Graph g = path(3);
    const ColorBudget b = ColorBudget::uniform(3, 4);
    const Strategy x = random_strategy(g, b, 1, rng);
    const Strategy y = random_strategy(g, b, 1, rng);
    const Strategy m = merge_two_guess(x, y);
    EXPECT_EQ(m.guess_count(), 2);
    for (Vertex v = 0; v < 3; ++v)
        for (std::size_t e = 0; e < m.entry_count(v); ++e) {
            EXPECT_TRUE(m.guesses(v, e).contains(x.guesses(v, e)[0]));
            EXPECT_TRUE(m.guesses(v, e).contains(y.guesses(v, e)[0]));
        }
    const Strategy two = as_two_guess(x);
    EXPECT_EQ(two.guess_count(), 2);
    EXPECT_EQ(two.guesses(1, 5), x.guesses(1, 5));
}

TEST(Game, StrategyTextRoundTrip) {
    SplitMix64 rng(4);
    const Graph g = cactus();
    const ColorBudget b({2, 3, 2, 3, 2});
    for (int gc = 1; gc <= 2; ++gc) {
        const Strategy s = random_strategy(g, b, gc, rng);
        EXPECT_EQ(parse_strategy(to_text(s), g, b), s);
    }
}
