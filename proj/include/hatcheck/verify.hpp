#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hatcheck/constructions.hpp"

namespace hatcheck {

struct VerifyOptions {
    /// Random strategies to try after the exhaustive pass.
    std::uint64_t trials = 1000;
    /// Enumerate every strategy when the space is at most exhaustive_limit.
    bool exhaustive = true;
    std::uint64_t exhaustive_limit = 100'000;
    std::uint64_t seed = 0;
    Guards guards;
};

struct VerifyReport {
    std::string oracle;
    std::uint64_t space = 0;
    bool enumerated = false;
    std::uint64_t exhaustive_checked = 0;
    std::uint64_t exhaustive_defeated = 0;
    std::uint64_t random_checked = 0;
    std::uint64_t random_defeated = 0;
    std::uint64_t premise_violations = 0;
    /// First strategy that was not defeated, with what the oracle returned.
    std::optional<std::string> counterexample;
    std::optional<std::string> premise_witness;

    std::uint64_t checked() const noexcept { return exhaustive_checked + random_checked; }
    std::uint64_t defeated() const noexcept { return exhaustive_defeated + random_defeated; }
    bool all_defeated() const noexcept { return defeated() == checked(); }
};

/// Runs the oracle on enumerated and seeded random strategies over its own
/// budget and guess count. A strategy counts as defeated when the returned
/// assignment is within the oracle budget and every vertex guesses wrong.
VerifyReport verify_oracle(const AdversaryOracle& oracle, const VerifyOptions& options = {});

}  // namespace hatcheck
