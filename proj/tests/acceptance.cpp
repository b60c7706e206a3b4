// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <gmpxx.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hatcheck/bounds.hpp"
#include "hatcheck/cli.hpp"
#include "hatcheck/constructions.hpp"
#include "hatcheck/errors.hpp"
#include "hatcheck/solver.hpp"
#include "oracles/naive_game.hpp"

using namespace hatcheck;
using namespace fixtures;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > limit_seconds) o.fail("took longer than " + std::to_string(limit_seconds) + " s");
    if (!o.ok) ++failures;
    std::printf("%s %2d %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title, secs, o.ok ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
}

naive::Game as_naive(const Graph& g, Color q, int guesses) {
    naive::Game n;
    n.n = g.vertex_count();
    for (const auto& e : g.edges()) n.edges.push_back(e);
    n.q.assign(static_cast<std::size_t>(n.n), static_cast<int>(q));
    n.guesses = guesses;
    return n;
}

// Exhaustive pass when the strategy space is at most 1e5, plus `random`
// seeded strategies.
void suite(Outcome& o, const std::string& name, const OraclePtr& oracle, std::uint64_t random) {
    const ContractTally t = check_contract(*oracle, random, 1);
    o.expect(t.checked > 0, name + ": nothing checked");
    o.expect(t.exhaustive || t.checked >= 1000, name + ": fewer than 1000 strategies");
    o.expect(t.defeated == t.checked, name + ": " + std::to_string(t.defeated) + "/" + std::to_string(t.checked) +
                                          " " + t.first_failure);
}

OraclePtr exhaustive_uniform(const Graph& g, Color q, int gc) {
    return oracle_exhaustive(g, ColorBudget::uniform(g.vertex_count(), q), gc);
}

// Every labelled rooted tree on n vertices, as parent arrays.
void rooted_trees(int n, std::vector<RootedTree>& out) {
    std::vector<Vertex> parent(static_cast<std::size_t>(n));
    std::function<void(int)> fill = [&](int v) {
        if (v == n) {
            int roots = 0;
            Vertex root = 0;
            for (Vertex u = 0; u < n; ++u)
                if (parent[u] == RootedTree::kNoParent) {
                    ++roots;
                    root = u;
                }
            if (roots != 1) return;
            try {
                out.emplace_back(parent, root);
            } catch (const std::exception&) {
                // cyclic parent array
            }
            return;
        }
        for (Vertex p = RootedTree::kNoParent; p < n; ++p) {
            if (p == v) continue;
            parent[v] = p;
            fill(v + 1);
        }
    };
    fill(0);
}

std::string without_timing(const std::string& text) {
    std::istringstream in(text);
    std::string kept;
    for (std::string l; std::getline(in, l);)
        if (l.rfind("wall-time-ms:", 0) != 0) kept += l + '\n';
    return kept;
}

}  // namespace

int main() {
    criterion(1, "hg_exact of K1, K2, K3", 60, [](Outcome& o) {
        for (int n = 1; n <= 3; ++n) {
            const int hg = hg_exact(complete(n));
            o.expect(hg == n, "hg_exact(K" + std::to_string(n) + ") = " + std::to_string(hg));
        }
    });

    criterion(2, "players_win agrees with the naive enumerator", 600, [](Outcome& o) {
        int agree = 0, total = 0;
        for (const auto& [name, g] : small_connected()) {
            if (g.vertex_count() > 3) continue;
            for (int gc = 1; gc <= 2; ++gc)
                for (Color q = 1; q <= 3; ++q) {
                    ++total;
                    const bool fast = players_win(g, ColorBudget::uniform(g.vertex_count(), q), gc).winner ==
                                      Winner::Players;
                    const bool slow = naive::players_win(as_naive(g, q, gc));
                    if (fast == slow)
                        ++agree;
                    else
                        o.fail(name + " q=" + std::to_string(q) + " guesses=" + std::to_string(gc));
                }
        }
        o.expect(total == 24, "expected 24 games, ran " + std::to_string(total));
        if (!o.ok) o.detail += " (" + std::to_string(agree) + "/" + std::to_string(total) + " agree)";
    });

    criterion(3, "sylvester and two-guess sequences", 1, [](Outcome& o) {
        const long s[] = {1, 2, 3, 7, 43, 1807};
        for (int n = 0; n <= 5; ++n)
            o.expect(sylvester(n).value() == s[n], "sylvester(" + std::to_string(n) + ") = " + to_text(sylvester(n)));
        const long a[] = {1, 3, 7, 43, 1807};
        for (int n = 0; n <= 4; ++n)
            o.expect(two_guess_seq(n).value() == a[n],
                     "two_guess_seq(" + std::to_string(n) + ") = " + to_text(two_guess_seq(n)));
        o.expect(two_guess_seq(1).value() == 3, "a_1 != 3");
    });

    criterion(4, "theta enclosure and growth bound", 5, [](Outcome& o) {
        const Interval t = theta_estimate(128);
        const mpq_class lo(255325, 100000), hi(255335, 100000);
        o.expect(mpfr_cmp_q(t.lo.get(), lo.get_mpq_t()) >= 0 && mpfr_cmp_q(t.hi.get(), hi.get_mpq_t()) <= 0,
                 "theta " + to_text(t) + " outside 2.5533 +- 5e-5");
        o.expect(mpfr_cmp_q(t.hi.get(), mpq_class(64, 25).get_mpq_t()) <= 0, "theta upper endpoint above 2.56");
        for (int n = 1; n <= 20; ++n) o.expect(growth_bound_holds(n, t.hi), "growth bound fails at n=" + std::to_string(n));
    });

    criterion(5, "circ_bound(3) exact and at least a_4", 1, [](Outcome& o) {
        mpq_class expected = 1;
        for (int i = 0; i < 8; ++i) expected *= mpq_class(64, 25);
        expected += mpq_class(1, 2);
        const BigBound b = circ_bound(3);
        o.expect(b.is_exact(), "circ_bound(3) not exact");
        if (b.is_exact()) o.expect(b.value() == expected, "circ_bound(3) = " + to_text(b));
        o.expect(certainly_le(two_guess_seq(4), b), "circ_bound(3) below 1807");
    });

    criterion(6, "constructive lemma defeat suites", 1800, [](Outcome& o) {
        // Independent-set peeling.
        suite(o, "is/empty", oracle_lemma_is(complete(2), {}, 1, 3, exhaustive_uniform(complete(2), 3, 1)), 1000);
        suite(o, "is/star", oracle_lemma_is(star(2), {1, 2}, 1, 2, exhaustive_uniform(complete(1), 2, 1)), 1000);
        suite(o, "is/path", oracle_lemma_is(path(3), {0, 2}, 1, 3, exhaustive_uniform(complete(1), 3, 1)), 1000);

        // Two colors at one vertex.
        suite(o, "two/edge",
              oracle_lemma_two_at_v(complete(2), 0, {0, 1}, 2, exhaustive_uniform(complete(1), 3, 2)), 1000);
        suite(o, "two/isolated",
              oracle_lemma_two_at_v(make(3, {{0, 1}}), 2, {3, 5}, 4, exhaustive_uniform(complete(2), 5, 2)), 1000);
        {
            const Color ell = static_cast<Color>(hg2_exact(complete(2)));
            const Subgraph h = remove_vertices(path(3), std::vector<Vertex>{0});
            suite(o, "two/path-end",
                  oracle_lemma_two_at_v(path(3), 0, {0, 1}, ell, exhaustive_uniform(h.graph, ell + 1, 2)), 1000);
        }

        // Gluing at a cut vertex.
        suite(o, "rus/bowtie", oracle_lemma_rus(bowtie(), 2, {0, 1, 2}, {2, 3, 4}, 6), 1000);
        {
            const Color ell = static_cast<Color>(std::max(2, hg2_exact(complete(2))));
            suite(o, "rus/path", oracle_lemma_rus(path(3), 1, {0, 1}, {1, 2}, ell), 1000);
        }
        suite(o, "rus/edge", oracle_lemma_rus(complete(2), 1, {0, 1}, {1}, 2), 1000);

        // Block decomposition.
        suite(o, "blocks/K3", oracle_lemma_blocks(complete(3), 6), 1000);
        suite(o, "blocks/P4", oracle_lemma_blocks(path(4), static_cast<Color>(hg2_exact(complete(2)))), 1000);
        suite(o, "blocks/cactus", oracle_lemma_blocks(cactus(), 6), 1000);

        // Tree closures.
        suite(o, "closure/single", oracle_closure(RootedTree({-1}, 0)), 1000);
        suite(o, "closure/path2", oracle_closure(RootedTree::path(2)), 10'000);
        suite(o, "closure/star2", oracle_closure(RootedTree::star(2)), 1000);
    });

    criterion(7, "closure oracle on every rooted tree with at most 3 vertices", 600, [](Outcome& o) {
        std::vector<RootedTree> trees;
        for (int n = 1; n <= 3; ++n) rooted_trees(n, trees);
        o.expect(trees.size() == 12, "expected 12 rooted trees, found " + std::to_string(trees.size()));
        for (const RootedTree& t : trees) {
            const OraclePtr oracle = oracle_closure(t);
            for (Vertex v = 0; v < t.vertex_count(); ++v) {
                const auto want = two_guess_seq(t.height_of(v) + 1).to_u64();
                o.expect(want && oracle->budget()[v] == *want, "budget mismatch on " + to_text(t));
            }
            suite(o, "closure " + to_text(t), oracle, 1000);
        }
    });

    criterion(8, "hg_exact below every applicable bound on connected graphs up to 4 vertices", 1800, [](Outcome& o) {
        int checks = 0;
        for (const auto& [name, g] : small_connected()) {
            int hg = 0;
            try {
                hg = hg_exact(g);
            } catch (const GuardExceeded&) {
                continue;
            }
            const BigBound value = BigBound::exact(mpq_class(hg));
            const auto check = [&](const BigBound& bound, const std::string& what) {
                ++checks;
                o.expect(certainly_le(value, bound), name + ": hg " + std::to_string(hg) + " above " + what);
            };
            const int c = circumference(g);
            if (c >= 3) check(circ_bound(c), "circ_bound(" + std::to_string(c) + ")");
            check(oracle_theorem_circ(g, CircDepth::Circumference).bound, "a_d");
            for (int h = 1; h <= 2; ++h)
                for (int t = 2; t <= 3; ++t)
                    if (!contains_tary_tree(g, t, h))
                        check(n_h_t_recursive(h, t), "N(" + std::to_string(h) + "," + std::to_string(t) + ")");
            for (int t = std::max(2, g.max_degree() + 1); t <= 6; ++t)
                check(BigBound::exact(mpq_class(static_cast<unsigned long>(lll_degree_ceiling(t)))),
                      "ceil(e*" + std::to_string(t) + ")");
        }
        o.expect(checks > 0, "no bound was checked");
    });

    criterion(9, "N(2,2) recursive at most closed form", 1, [](Outcome& o) {
        o.expect(certainly_le(n_h_t_recursive(2, 2), n_h_t_closed(2, 2)),
                 to_text(n_h_t_recursive(2, 2)) + " vs " + to_text(n_h_t_closed(2, 2)));
    });

    criterion(10, "verify reports are byte-identical across runs", 600, [](Outcome& o) {
        const std::string graph = std::string(HATCHECK_DATA_DIR) + "/cactus.txt";
        const std::vector<std::string> args{"verify", graph, "--lemma", "blocks", "--trials", "500", "--seed", "42",
                                            "--trace"};
        std::string first;
        for (int i = 0; i < 3; ++i) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            o.expect(code == 0, "verify exited " + std::to_string(code));
            const std::string report = without_timing(out.str());
            if (i == 0)
                first = report;
            else
                o.expect(report == first, "run " + std::to_string(i + 1) + " differs");
        }
    });

    return failures == 0 ? 0 : 1;
}
