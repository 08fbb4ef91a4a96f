#ifndef GT_SIMULATOR_HPP
#define GT_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "gt/design.hpp"

namespace gt {

/// Ground truth for one trial: which of the n members are defective.
struct PopulationState {
    int n = 0;
    std::vector<std::uint8_t> defective;
};

namespace sim {

/// Samples each member independently as defective with probability p.
/// Same (n, p, seed) always yields the same vector.
PopulationState generate_population(int n, double p, std::uint64_t seed);

/// Builds a population with exactly the listed members (0-based) defective.
/// Used by fixture scenarios where the ground truth is prescribed.
PopulationState population_from_defectives(int n, const std::vector<int>& defectives);

/**
 * Everything observable from one protocol execution. stage_tests has one
 * entry per pooling stage plus a final entry for the individual stage.
 * exit_stage[i] is the 1-based last stage member i took part in, so members
 * cleared by the first pooling round have exit 1 and members retested
 * individually have exit k+1. duration_total charges each member the
 * weight of every stage it attended, counting a stage's joint tests as
 * running in parallel.
 */
struct TrialOutcome {
    std::vector<long long> stage_tests;
    long long total_tests = 0;
    std::vector<int> exit_stage;
    std::vector<int> identified_defectives;  // ascending member indices
    double duration_total = 0.0;
};

/**
 * One caller-pinned stage: r permutations of the suspects entering the
 * stage, each read off into consecutive pools of the stage's group size.
 */
struct StageAssignment {
    std::vector<std::vector<int>> rounds;
};

/**
 * Runs the conservative multi-stage protocol once. Per pooling stage the
 * current suspects are shuffled r_l times; each shuffle is cut into
 * ceil(m / s_l) consecutive pools (the last possibly smaller, still one
 * test); a pool is positive iff it holds at least one defective; a member
 * stays suspected only if every one of its r_l pools was positive.
 * Remaining suspects after the last pooling stage are tested individually,
 * which makes the identification exact. All randomness comes from the
 * given seed through one sequential stream, so outcomes are reproducible.
 */
TrialOutcome run_trial(const Plan& plan, const PopulationState& pop,
                       const std::vector<double>& weights, std::uint64_t seed);

/// Baseline without pooling: everyone is tested individually in one stage.
/// weights must hold exactly one entry.
TrialOutcome run_individual_trial(const PopulationState& pop,
                                  const std::vector<double>& weights);

/**
 * run_trial with caller-supplied permutations instead of seeded shuffles.
 * assignments must hold one StageAssignment per pooling stage whose rounds
 * are permutations of the suspects actually entering that stage; this is
 * checked as the protocol advances and violations raise AssignmentMismatch
 * with the 1-based stage.
 */
TrialOutcome run_trial_with_assignment(const Plan& plan, const PopulationState& pop,
                                       const std::vector<StageAssignment>& assignments,
                                       const std::vector<double>& weights);

/**
 * m_val independent trials with fresh Bernoulli populations. Trial i draws
 * its population and protocol seeds from derive_stream(base_seed, i), so
 * the outcome list is identical no matter how many workers run it or in
 * which order trials finish. workers <= 1 runs sequentially.
 */
std::vector<TrialOutcome> replicate(const Plan& plan, int n, double p,
                                    const std::vector<double>& weights, int m_val,
                                    std::uint64_t base_seed, int workers = 1);

/// replicate for the individual-testing baseline; same seeding scheme.
std::vector<TrialOutcome> replicate_individual(int n, double p,
                                               const std::vector<double>& weights, int m_val,
                                               std::uint64_t base_seed);

}  // namespace sim
}  // namespace gt

#endif  // GT_SIMULATOR_HPP
