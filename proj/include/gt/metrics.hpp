#ifndef GT_METRICS_HPP
#define GT_METRICS_HPP

#include <cstddef>
#include <vector>

#include "gt/simulator.hpp"

namespace gt {
namespace metrics {

/// Probability cuts separating the three reporting intervals. A grid point
/// sitting on a cut belongs to the interval below it.
inline constexpr double kLowCut = 0.077;
inline constexpr double kHighCut = 0.182;

/// Average observed tests per member over a batch of trials.
double atm(const std::vector<sim::TrialOutcome>& outcomes, int n);

/// Spread of the observed test totals: max - min.
long long range_stat(const std::vector<sim::TrialOutcome>& outcomes);

/// Smallest and largest observed test totals.
long long min_tests(const std::vector<sim::TrialOutcome>& outcomes);
long long max_tests(const std::vector<sim::TrialOutcome>& outcomes);

/**
 * Mean absolute percentage error between an expected and an observed
 * series: (100 / len) * sum |e_i - o_i| / |e_i|. Series must have equal
 * positive length (LengthMismatch) and no expected entry may be zero
 * (ZeroExpected).
 */
double mape(const std::vector<double>& expected, const std::vector<double>& observed);

/// Index sets of an ascending probability grid split at the two cuts.
struct IntervalPartition {
    std::vector<std::size_t> low;   // p <= 0.077
    std::vector<std::size_t> mid;   // 0.077 < p <= 0.182
    std::vector<std::size_t> high;  // p > 0.182
};

/// Splits grid indices at the cuts; throws UnsortedGrid unless the grid is
/// non-decreasing. Cut comparisons carry a 1e-12 slack so grid points
/// assembled as i * step land in the same interval as their exact values.
IntervalPartition interval_partition(const std::vector<double>& p_grid);

/// Average observed duration per member over a batch of trials.
double avg_duration_per_member(const std::vector<sim::TrialOutcome>& outcomes, int n);

}  // namespace metrics
}  // namespace gt

#endif  // GT_METRICS_HPP
