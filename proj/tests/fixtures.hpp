#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hatcheck/constructions.hpp"
#include "hatcheck/errors.hpp"
#include "hatcheck/graph.hpp"
#include "hatcheck/rng.hpp"
#include "oracles/defeat_check.hpp"

namespace fixtures {

using hatcheck::Edge;
using hatcheck::Graph;

inline Graph make(int n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

inline Graph complete(int n) {
    std::vector<Edge> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return make(n, e);
}

inline Graph path(int n) {
    std::vector<Edge> e;
    for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return make(n, e);
}

inline Graph cycle(int n) {
    std::vector<Edge> e;
    for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
    return make(n, e);
}

inline Graph star(int leaves) {
    std::vector<Edge> e;
    for (int v = 1; v <= leaves; ++v) e.emplace_back(0, v);
    return make(leaves + 1, e);
}

inline Graph bowtie() { return make(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}}); }

/// Triangle 0-1-2 with the pendant path 2-3-4.
inline Graph cactus() { return make(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}}); }

inline Graph paw() { return make(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}); }
inline Graph diamond() { return make(4, {{0, 1}, {1, 2}, {0, 2}, {1, 3}, {2, 3}}); }

/// Every connected graph on 1..4 vertices up to isomorphism.
inline std::vector<std::pair<std::string, Graph>> small_connected() {
    return {{"K1", complete(1)}, {"K2", complete(2)}, {"P3", path(3)},     {"K3", complete(3)},
            {"P4", path(4)},     {"K1,3", star(3)},  {"C4", cycle(4)},     {"paw", paw()},
            {"diamond", diamond()}, {"K4", complete(4)}};
}

struct ContractTally {
    std::uint64_t checked = 0;
    std::uint64_t defeated = 0;
    bool exhaustive = false;
    std::string first_failure;
};

/// Oracle contract: every enumerated strategy when the space is at most
/// `exhaustive_limit`, then `random` seeded strategies. A strategy counts
/// when the returned assignment is within the oracle budget and fools every
/// vertex, both checked on the test side.
inline ContractTally check_contract(const hatcheck::AdversaryOracle& o, std::uint64_t random, std::uint64_t seed,
                                    std::uint64_t exhaustive_limit = 100'000) {
    ContractTally t;
    auto one = [&](const hatcheck::Strategy& s) {
        ++t.checked;
        try {
            const auto a = o.defeat(s);
            if (a.within(o.budget()) && naive::all_wrong(s, a)) {
                ++t.defeated;
                return;
            }
            if (t.first_failure.empty()) t.first_failure = hatcheck::to_text(s) + "-> " + hatcheck::to_text(a);
        } catch (const std::exception& e) {
            if (t.first_failure.empty()) t.first_failure = e.what();
        }
    };
    const auto space = hatcheck::strategy_space_size(o.graph(), o.budget(), o.guess_count());
    if (space <= exhaustive_limit) {
        t.exhaustive = true;
        hatcheck::StrategyEnumerator it(o.graph(), o.budget(), o.guess_count());
        while (it.next()) one(it.current());
    }
    hatcheck::SplitMix64 rng(seed);
    for (std::uint64_t i = 0; i < random; ++i)
        one(hatcheck::random_strategy(o.graph(), o.budget(), o.guess_count(), rng));
    return t;
}

}  // namespace fixtures
