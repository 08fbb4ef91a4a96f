#include "gt/analytic.hpp"

#include <cmath>

#include "gt/errors.hpp"

namespace gt {

PopulationModel::PopulationModel(int n_, double p_) : n(n_), p(p_), q(1.0 - p_) {
    if (n < 1) throw DomainError("population size must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("defect probability must lie in [0, 1]");
}

namespace analytic {

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1]");
}

}  // namespace

double group_negative_prob(double p, int s) {
    check_probability(p);
    if (s < 1) throw DomainError("group size must be positive");
    return std::pow(1.0 - p, s);
}

double suspected_prob(double p, int s, int r) {
    check_probability(p);
    if (s < 1) throw DomainError("group size must be positive");
    if (r < 1) throw DomainError("joint-test count must be positive");
    const double q = 1.0 - p;
    return p + q * std::pow(1.0 - std::pow(q, s - 1), r);
}

double etm_core(const int* r, const int* s, int k, double p) {
    double acc = static_cast<double>(r[0]) / s[0];
    for (int l = 1; l < k; ++l) {
        acc += static_cast<double>(r[l]) / s[l] * suspected_prob(p, s[l - 1], r[l - 1]);
    }
    acc += suspected_prob(p, s[k - 1], r[k - 1]);
    return acc;
}

namespace {

// Pulls the stage parameters into flat arrays once per call; the formulas
// only ever need (r, s) pairs in order.
void split_plan(const Plan& plan, std::vector<int>& r, std::vector<int>& s) {
    r.reserve(plan.stages.size());
    s.reserve(plan.stages.size());
    for (const Stage& st : plan.stages) {
        r.push_back(st.r);
        s.push_back(st.s);
    }
}

}  // namespace

double expected_tests(const Plan& plan, const PopulationModel& model) {
    validate_plan(plan, model.n);
    std::vector<int> r, s;
    split_plan(plan, r, s);
    return model.n * etm_core(r.data(), s.data(), plan.k(), model.p);
}

double etm(const Plan& plan, const PopulationModel& model) {
    validate_plan(plan, model.n);
    std::vector<int> r, s;
    split_plan(plan, r, s);
    // Computed directly rather than as expected_tests / n, so the value is
    // bit-identical to the optimizer's objective regardless of n.
    return etm_core(r.data(), s.data(), plan.k(), model.p);
}

double expected_duration(const Plan& plan, const PopulationModel& model,
                         const std::vector<double>& weights) {
    validate_plan(plan, model.n);
    const std::size_t want = plan.stages.size() + 1;
    if (weights.size() != want) throw WeightArityMismatch(weights.size(), want);
    for (double w : weights) {
        if (!(w >= 0.0)) throw DomainError("stage weights must be non-negative");
    }
    double per_member = weights[0];
    for (std::size_t l = 1; l < want; ++l) {
        const Stage& prev = plan.stages[l - 1];
        per_member += weights[l] * suspected_prob(model.p, prev.s, prev.r);
    }
    return model.n * per_member;
}

double binary_entropy(double p) {
    check_probability(p);
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double counting_bound(const PopulationModel& model) {
    return binary_entropy(model.p) * model.n;
}

double rate(const Plan& plan, const PopulationModel& model) {
    // expected_tests >= n * r_1/s_1 > 0 for every valid plan, so the only
    // degenerate case is the vanishing numerator at p in {0, 1}.
    return counting_bound(model) / expected_tests(plan, model);
}

double binomial_asymptotic_ratio(long long n, long long s) {
    if (n < 1 || s < 1) throw DomainError("binomial ratio needs positive n and s");
    if (s > n) throw DomainError("cannot choose more members than the population holds");
    const double log_ratio = std::lgamma(static_cast<double>(n) + 1.0) -
                             std::lgamma(static_cast<double>(n - s) + 1.0) -
                             static_cast<double>(s) * std::log(static_cast<double>(n));
    return std::exp(log_ratio);
}

std::vector<double> unit_weights(int k) {
    if (k < 0) throw DomainError("stage count cannot be negative");
    return std::vector<double>(static_cast<std::size_t>(k) + 1, 1.0);
}

}  // namespace analytic
}  // namespace gt
