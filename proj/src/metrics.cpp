#include "gt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gt/errors.hpp"

namespace gt {
namespace metrics {

namespace {

void check_nonempty(const std::vector<sim::TrialOutcome>& outcomes) {
    if (outcomes.empty()) throw EmptyOutcomes();
}

}  // namespace

double atm(const std::vector<sim::TrialOutcome>& outcomes, int n) {
    check_nonempty(outcomes);
    if (n < 1) throw DomainError("population size must be positive");
    double total = 0.0;
    for (const sim::TrialOutcome& o : outcomes) total += static_cast<double>(o.total_tests);
    return total / static_cast<double>(outcomes.size()) / static_cast<double>(n);
}

long long min_tests(const std::vector<sim::TrialOutcome>& outcomes) {
    check_nonempty(outcomes);
    long long lowest = outcomes.front().total_tests;
    for (const sim::TrialOutcome& o : outcomes) lowest = std::min(lowest, o.total_tests);
    return lowest;
}

long long max_tests(const std::vector<sim::TrialOutcome>& outcomes) {
    check_nonempty(outcomes);
    long long highest = outcomes.front().total_tests;
    for (const sim::TrialOutcome& o : outcomes) highest = std::max(highest, o.total_tests);
    return highest;
}

long long range_stat(const std::vector<sim::TrialOutcome>& outcomes) {
    return max_tests(outcomes) - min_tests(outcomes);
}

double mape(const std::vector<double>& expected, const std::vector<double>& observed) {
    if (expected.empty() || expected.size() != observed.size()) {
        throw LengthMismatch("mape needs two series of equal positive length, got " +
                             std::to_string(expected.size()) + " and " +
                             std::to_string(observed.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] == 0.0) throw ZeroExpected();
        acc += std::abs(expected[i] - observed[i]) / std::abs(expected[i]);
    }
    return acc / static_cast<double>(expected.size()) * 100.0;
}

IntervalPartition interval_partition(const std::vector<double>& p_grid) {
    for (std::size_t i = 1; i < p_grid.size(); ++i) {
        if (p_grid[i] < p_grid[i - 1]) throw UnsortedGrid();
    }
    IntervalPartition parts;
    constexpr double slack = 1e-12;
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (p_grid[i] <= kLowCut + slack) {
            parts.low.push_back(i);
        } else if (p_grid[i] <= kHighCut + slack) {
            parts.mid.push_back(i);
        } else {
            parts.high.push_back(i);
        }
    }
    return parts;
}

double avg_duration_per_member(const std::vector<sim::TrialOutcome>& outcomes, int n) {
    check_nonempty(outcomes);
    if (n < 1) throw DomainError("population size must be positive");
    double total = 0.0;
    for (const sim::TrialOutcome& o : outcomes) total += o.duration_total;
    return total / static_cast<double>(outcomes.size()) / static_cast<double>(n);
}

}  // namespace metrics
}  // namespace gt
