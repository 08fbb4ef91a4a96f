#include "gt/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "gt/errors.hpp"
#include "gt/rng.hpp"

namespace gt {
namespace sim {

PopulationState generate_population(int n, double p, std::uint64_t seed) {
    if (n < 1) throw DomainError("population size must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("defect probability must lie in [0, 1]");
    PopulationState pop;
    pop.n = n;
    pop.defective.resize(static_cast<std::size_t>(n));
    SplitMix64 rng(seed);
    for (int i = 0; i < n; ++i) {
        pop.defective[static_cast<std::size_t>(i)] = rng.bernoulli(p) ? 1 : 0;
    }
    return pop;
}

PopulationState population_from_defectives(int n, const std::vector<int>& defectives) {
    if (n < 1) throw DomainError("population size must be positive");
    PopulationState pop;
    pop.n = n;
    pop.defective.assign(static_cast<std::size_t>(n), 0);
    for (int i : defectives) {
        if (i < 0 || i >= n) {
            throw ValidationError("defective member " + std::to_string(i) +
                                  " is outside the population");
        }
        pop.defective[static_cast<std::size_t>(i)] = 1;
    }
    return pop;
}

namespace {

void check_weights(const std::vector<double>& weights, std::size_t want) {
    if (weights.size() != want) throw WeightArityMismatch(weights.size(), want);
    for (double w : weights) {
        if (!(w >= 0.0)) throw DomainError("stage weights must be non-negative");
    }
}

/**
 * Shared protocol walk. next_round produces the permutation for (stage,
 * round) given the current ascending suspect list; the seeded and the
 * fixture-driven entry points only differ there.
 */
template <typename NextRound>
TrialOutcome run_protocol(const Plan& plan, const PopulationState& pop,
                          const std::vector<double>& weights, NextRound&& next_round) {
    validate_plan(plan, pop.n);
    const int k = plan.k();
    check_weights(weights, static_cast<std::size_t>(k) + 1);

    TrialOutcome out;
    out.stage_tests.assign(static_cast<std::size_t>(k) + 1, 0);
    out.exit_stage.assign(static_cast<std::size_t>(pop.n), 0);

    std::vector<int> suspects(static_cast<std::size_t>(pop.n));
    std::iota(suspects.begin(), suspects.end(), 0);
    std::vector<std::uint8_t> keep(static_cast<std::size_t>(pop.n), 0);

    for (int l = 0; l < k; ++l) {
        const Stage& st = plan.stages[static_cast<std::size_t>(l)];
        const int m = static_cast<int>(suspects.size());
        for (int i : suspects) out.exit_stage[static_cast<std::size_t>(i)] = l + 1;
        out.duration_total += weights[static_cast<std::size_t>(l)] * m;
        if (m == 0) continue;

        const int groups = (m + st.s - 1) / st.s;
        out.stage_tests[static_cast<std::size_t>(l)] =
            static_cast<long long>(st.r) * groups;

        for (int i : suspects) keep[static_cast<std::size_t>(i)] = 1;
        for (int round = 0; round < st.r; ++round) {
            const std::vector<int>& perm = next_round(l, round, suspects);
            for (int g = 0; g < groups; ++g) {
                const int begin = g * st.s;
                const int end = std::min(m, begin + st.s);
                bool positive = false;
                for (int pos = begin; pos < end; ++pos) {
                    if (pop.defective[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])]) {
                        positive = true;
                        break;
                    }
                }
                if (!positive) {
                    // One clean pool is enough to clear a member for good.
                    for (int pos = begin; pos < end; ++pos) {
                        keep[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])] = 0;
                    }
                }
            }
        }

        std::vector<int> surviving;
        surviving.reserve(suspects.size());
        for (int i : suspects) {
            if (keep[static_cast<std::size_t>(i)]) surviving.push_back(i);
        }
        suspects = std::move(surviving);
    }

    out.stage_tests[static_cast<std::size_t>(k)] = static_cast<long long>(suspects.size());
    out.duration_total +=
        weights[static_cast<std::size_t>(k)] * static_cast<double>(suspects.size());
    for (int i : suspects) {
        out.exit_stage[static_cast<std::size_t>(i)] = k + 1;
        if (pop.defective[static_cast<std::size_t>(i)]) {
            out.identified_defectives.push_back(i);
        }
    }
    for (long long t : out.stage_tests) out.total_tests += t;
    return out;
}

}  // namespace

TrialOutcome run_trial(const Plan& plan, const PopulationState& pop,
                       const std::vector<double>& weights, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<int> perm;
    return run_protocol(plan, pop, weights,
                        [&](int, int, const std::vector<int>& suspects) -> const std::vector<int>& {
                            perm = suspects;
                            fisher_yates(perm, rng);
                            return perm;
                        });
}

TrialOutcome run_individual_trial(const PopulationState& pop,
                                  const std::vector<double>& weights) {
    check_weights(weights, 1);
    TrialOutcome out;
    out.stage_tests = {pop.n};
    out.total_tests = pop.n;
    out.exit_stage.assign(static_cast<std::size_t>(pop.n), 1);
    out.duration_total = weights[0] * pop.n;
    for (int i = 0; i < pop.n; ++i) {
        if (pop.defective[static_cast<std::size_t>(i)]) out.identified_defectives.push_back(i);
    }
    return out;
}

TrialOutcome run_trial_with_assignment(const Plan& plan, const PopulationState& pop,
                                       const std::vector<StageAssignment>& assignments,
                                       const std::vector<double>& weights) {
    if (assignments.size() != plan.stages.size()) {
        throw AssignmentMismatch(static_cast<int>(assignments.size()) + 1,
                                 "fixture provides " + std::to_string(assignments.size()) +
                                     " stage assignments for " +
                                     std::to_string(plan.stages.size()) + " pooling stages");
    }
    std::vector<int> sorted;
    return run_protocol(
        plan, pop, weights,
        [&](int l, int round, const std::vector<int>& suspects) -> const std::vector<int>& {
            const StageAssignment& stage = assignments[static_cast<std::size_t>(l)];
            if (static_cast<int>(stage.rounds.size()) !=
                plan.stages[static_cast<std::size_t>(l)].r) {
                throw AssignmentMismatch(l + 1, "fixture provides " +
                                                     std::to_string(stage.rounds.size()) +
                                                     " rounds, stage runs " +
                                                     std::to_string(plan.stages[static_cast<std::size_t>(l)].r));
            }
            const std::vector<int>& perm = stage.rounds[static_cast<std::size_t>(round)];
            sorted = perm;
            std::sort(sorted.begin(), sorted.end());
            // suspects is maintained in ascending order, so one sorted
            // comparison checks "same members, each exactly once".
            if (sorted != suspects) {
                throw AssignmentMismatch(l + 1,
                                         "round " + std::to_string(round + 1) +
                                             " does not cover the current suspect set");
            }
            return perm;
        });
}

std::vector<TrialOutcome> replicate(const Plan& plan, int n, double p,
                                    const std::vector<double>& weights, int m_val,
                                    std::uint64_t base_seed, int workers) {
    if (m_val < 1) throw DomainError("replication count must be positive");
    // Validate up front: worker threads must not be the ones to throw.
    validate_plan(plan, n);
    check_weights(weights, plan.stages.size() + 1);
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("defect probability must lie in [0, 1]");
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(m_val));
    auto run_index = [&](int i) {
        const std::uint64_t stream = derive_stream(base_seed, static_cast<std::uint64_t>(i));
        const PopulationState pop = generate_population(n, p, derive_stream(stream, 0));
        outcomes[static_cast<std::size_t>(i)] =
            run_trial(plan, pop, weights, derive_stream(stream, 1));
    };
    if (workers <= 1) {
        for (int i = 0; i < m_val; ++i) run_index(i);
        return outcomes;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < m_val; i += workers) run_index(i);
        });
    }
    for (std::thread& t : pool) t.join();
    return outcomes;
}

std::vector<TrialOutcome> replicate_individual(int n, double p,
                                               const std::vector<double>& weights, int m_val,
                                               std::uint64_t base_seed) {
    if (m_val < 1) throw DomainError("replication count must be positive");
    std::vector<TrialOutcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(m_val));
    for (int i = 0; i < m_val; ++i) {
        const std::uint64_t stream = derive_stream(base_seed, static_cast<std::uint64_t>(i));
        const PopulationState pop = generate_population(n, p, derive_stream(stream, 0));
        outcomes.push_back(run_individual_trial(pop, weights));
    }
    return outcomes;
}

}  // namespace sim
}  // namespace gt
