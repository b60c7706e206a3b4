#include "hatcheck/verify.hpp"

#include "hatcheck/errors.hpp"
#include "hatcheck/rng.hpp"

namespace hatcheck {

namespace {

// Returns true when the oracle defeated s; records the first failure.
bool check_one(const AdversaryOracle& oracle, const Strategy& s, VerifyReport& report) {
    try {
        const HatAssignment a = oracle.defeat(s);
        if (a.within(oracle.budget()) && is_defeating(s, a)) return true;
        if (!report.counterexample)
            report.counterexample = to_text(s) + "returned " + to_text(a) + "\n";
    } catch (const PremiseViolation& e) {
        ++report.premise_violations;
        if (!report.premise_witness) report.premise_witness = std::string(e.what()) + "\n" + e.witness();
    }
    return false;
}

}  // namespace

VerifyReport verify_oracle(const AdversaryOracle& oracle, const VerifyOptions& options) {
    VerifyReport report;
    report.oracle = oracle.name();
    const Graph& g = oracle.graph();
    report.space = strategy_space_size(g, oracle.budget(), oracle.guess_count());

    if (options.exhaustive && report.space <= options.exhaustive_limit) {
        report.enumerated = true;
        StrategyEnumerator it(g, oracle.budget(), oracle.guess_count(), options.guards);
        while (it.next()) {
            ++report.exhaustive_checked;
            if (check_one(oracle, it.current(), report)) ++report.exhaustive_defeated;
        }
    }

    SplitMix64 rng(options.seed);
    for (std::uint64_t i = 0; i < options.trials; ++i) {
        const Strategy s = random_strategy(g, oracle.budget(), oracle.guess_count(), rng, options.guards);
        ++report.random_checked;
        if (check_one(oracle, s, report)) ++report.random_defeated;
    }
    return report;
}

}  // namespace hatcheck
