#ifndef GT_OPTIMIZER_HPP
#define GT_OPTIMIZER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "gt/analytic.hpp"
#include "gt/design.hpp"

namespace gt {
namespace opt {

/// How the per-stage joint-test counts are chosen during the search.
enum class RMode {
    PresetFixed,  // pattern implied by the preset
    CommonR,      // one shared r for all stages, searched in [1, r_max]
    FixedVector,  // caller-supplied r per stage
    FreeR,        // every stage's r searched independently in [1, r_max]
};

/**
 * Search space description. Either start from a preset (stage count and
 * joint-test pattern implied, with RpTwo searching its first-stage r) or
 * set use_preset = false and give k, mode and fixed_r explicitly.
 *
 * s_max = 0 derives a per-call bound from the model:
 * min(n, max(50, ceil(10 / p))). Good pool sizes scale like 1/sqrt(p), so
 * this brackets the optimum with a wide margin while keeping the grid
 * finite; pass an explicit s_max to override.
 */
struct OptimizationSpec {
    Preset preset = Preset::SpTwo;
    bool use_preset = true;

    int k = 1;
    RMode mode = RMode::PresetFixed;
    std::vector<int> fixed_r;

    int s_max = 0;
    int r_max = 10;
    std::uint64_t eval_budget = 100000000ull;
};

/**
 * Outcome of a search. When no pooled plan beats one test per member, the
 * result falls back to individual testing: plan empty, etm_value = 1,
 * feasible = false. evaluations counts objective and partial-objective
 * evaluations actually performed.
 */
struct OptimizationResult {
    std::optional<Plan> plan;
    double etm_value = 1.0;
    bool feasible = false;
    std::uint64_t evaluations = 0;

    bool individual() const { return !plan.has_value(); }
};

/**
 * Exact search for the expected-tests-per-member minimizer over the integer
 * grid s_l in [2, s_max] with r per mode. Ties are broken toward the
 * smaller total joint-test count, then the lexicographically smaller
 * (s_1, ..., s_k); the returned etm_value is recomputed through
 * analytic::etm_core for the winning plan.
 *
 * The objective is a chain: each term couples only adjacent stages. For
 * k >= 3 the search therefore runs as a backward recurrence over
 * (s_{l-1}, s_l) pairs instead of enumerating the full Cartesian grid,
 * which keeps the work at O(k * s_max^2) evaluations. Throws
 * BudgetExceeded up front when the projected evaluation count would pass
 * eval_budget; requires 0 <= p < 1.
 */
OptimizationResult optimize(const OptimizationSpec& spec, const PopulationModel& model);

/**
 * Largest grid probability (multiples of p_step up to p_end) at which the
 * preset's pooling still genuinely works. The detector asks whether the
 * continuous relaxation of the expected-tests objective has an interior
 * stationary point with every stage size >= 2; past that point the
 * optimizer is merely pinned to its search bounds and members can no
 * longer be divided into effective groups. p = 0 counts as workable for
 * every pooled preset, and Individual returns 0 by convention. Uses
 * spec.r_max for RpTwo; ignores s_max (the relaxation is scanned
 * continuously).
 */
double feasibility_threshold(Preset preset, const OptimizationSpec& spec,
                             double p_step = 0.001, double p_end = 0.35);

}  // namespace opt
}  // namespace gt

#endif  // GT_OPTIMIZER_HPP
