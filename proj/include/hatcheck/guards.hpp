#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hatcheck {

/// Size limits for the exponential procedures. All of them are plain
/// configuration; the CLI reads overrides from HATCHECK_GUARDS.
struct Guards {
    std::uint64_t assignments = 1'000'000;     // solver: product of budgets
    std::uint64_t table_entries = 100'000;     // solver: total guess-table entries
    std::uint64_t solver_nodes = 50'000'000;   // solver: search nodes
    std::uint64_t enumeration = 10'000'000;    // assignment enumeration
    std::uint64_t circumference_vertices = 20; // exhaustive cycle search
    std::uint64_t tree_embedding_nodes = 10'000'000;  // t-ary subtree search steps
    std::uint64_t strategy_entries = 5'000'000;       // size of any materialized strategy

    /// Parses "key=value,key=value". Unknown keys throw std::invalid_argument.
    /// Keys: assignments, tables, nodes, enumeration, circumference, embedding, entries.
    static Guards parse(std::string_view spec);
    static Guards parse(std::string_view spec, Guards base);

    /// Defaults overridden by $HATCHECK_GUARDS when set.
    static Guards from_environment();
};

}  // namespace hatcheck
