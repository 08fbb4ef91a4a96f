#ifndef GT_DESIGN_HPP
#define GT_DESIGN_HPP

#include <optional>
#include <string>
#include <vector>

namespace gt {

/// Parameters of one pooling stage: every member takes part in exactly r
/// joint tests and every pool holds exactly s members.
struct Stage {
    int r = 1;
    int s = 1;
};

/**
 * An ordered multi-stage testing plan. stages.size() is the number of
 * pooling stages k; the final individual-retest stage always follows the
 * last pooling stage and is never stored explicitly. Stage indices are
 * 1-based in error messages and printed output.
 *
 * Individual-only testing (no pooling) is deliberately not representable as
 * an empty plan. Call sites that may fall back to it, like the optimizer
 * result, carry it as a separate case, which keeps "plan" synonymous with
 * "at least one pooling stage".
 */
struct Plan {
    std::vector<Stage> stages;
    std::string label;  // preset name when instantiated from one, else empty

    int k() const { return static_cast<int>(stages.size()); }
};

/**
 * Named designs from the benchmark family. The -two/-three/-four suffix
 * counts stages including the final individual one, so SpThree has two
 * pooling stages. Sp fixes one joint test per member in every stage, Dp
 * fixes two in the first stage and one afterwards, and RpTwo leaves the
 * first-stage joint-test count open for the caller or the optimizer.
 */
enum class Preset {
    Individual,
    SpTwo,
    DpTwo,
    RpTwo,
    SpThree,
    DpThree,
    SpFour,
    DpFour,
};

/// Every preset in canonical output order (Individual first, then by stage
/// count).
const std::vector<Preset>& all_presets();

/// Number of pooling stages k (0 for Individual).
int preset_stage_count(Preset id);

/// True when the preset's first-stage joint-test count must be supplied by
/// the caller (currently only RpTwo).
bool preset_requires_r(Preset id);

/**
 * Joint-test counts per stage implied by the preset. r_value supplies the
 * first-stage count for RpTwo and must be omitted for every other preset;
 * violations raise RValueRequired or RValueForbidden.
 */
std::vector<int> preset_r_pattern(Preset id, std::optional<int> r_value = std::nullopt);

/// Canonical lowercase name: "individual", "sp-two", ..., "dp-four".
std::string preset_name(Preset id);

/// Inverse of preset_name. Throws ValidationError for unknown names.
Preset parse_preset(const std::string& name);

/**
 * Checks 1 <= s_l <= n and r_l >= 1 for every stage. Throws
 * GroupSizeExceedsPopulation or NonPositiveParameter naming the offending
 * 1-based stage; returns normally when the plan is usable for a population
 * of size n.
 */
void validate_plan(const Plan& plan, int n);

/// True when some stage has s = 1. Legal but pointless: a singleton pool
/// clears nobody beyond its own member.
bool has_degenerate_stage(const Plan& plan);

/**
 * Builds a plan from a preset and per-stage group sizes. stage_sizes must
 * have exactly preset_stage_count entries (ArityMismatch otherwise);
 * r_value follows the preset_r_pattern rules. Individual has no stages to
 * instantiate and is rejected with ValidationError.
 */
Plan instantiate_preset(Preset id, const std::vector<int>& stage_sizes,
                        std::optional<int> r_value = std::nullopt);

/**
 * Parses the compact plan grammar: comma-separated RxS stage tokens, e.g.
 * "2x5,1x3" for two joint tests in pools of five, then singles in pools of
 * three. Throws ValidationError on malformed text.
 */
Plan parse_plan_shorthand(const std::string& text);

/// Renders a plan back into the "2x5,1x3" form.
std::string plan_shorthand(const Plan& plan);

/// Serializes as {"stages": [{"r": 2, "s": 5}, ...]}.
std::string plan_to_json(const Plan& plan);

/// Parses the serialization above. Throws SchemaMismatch on malformed input.
Plan plan_from_json(const std::string& text);

}  // namespace gt

#endif  // GT_DESIGN_HPP
