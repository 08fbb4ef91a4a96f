#ifndef GT_ANALYTIC_HPP
#define GT_ANALYTIC_HPP

#include <cstdint>
#include <vector>

#include "gt/design.hpp"

namespace gt {

/// Population model: n members, each independently defective with
/// probability p. q = 1 - p is kept alongside p because the formulas below
/// use both constantly.
struct PopulationModel {
    int n;
    double p;
    double q;

    PopulationModel(int n_, double p_);
};

namespace analytic {

/// Probability that a pool of s members contains no defective: (1-p)^s.
double group_negative_prob(double p, int s);

/**
 * Probability that a member is still suspected after one stage with group
 * size s and r independent joint tests per member:
 *
 *   p + (1-p) * (1 - (1-p)^(s-1))^r
 *
 * A defective member is always suspected; a non-defective one stays
 * suspected only if each of its r pools happens to contain some other
 * defective. s = 1 collapses to p, since a singleton pool is just an
 * individual test.
 */
double suspected_prob(double p, int s, int r);

/**
 * Expected total number of tests for a pooled plan on n members, in the
 * large-n regime where stage-l entrants thin out by the previous stage's
 * suspected probability:
 *
 *   n * ( r_1/s_1
 *         + sum_{l=2..k} (r_l/s_l) * suspected_prob(p, s_{l-1}, r_{l-1})
 *         + suspected_prob(p, s_k, r_k) )
 *
 * The last term is the individual-retest stage. Individual-only testing
 * costs exactly n and is handled by callers, not by this function.
 */
double expected_tests(const Plan& plan, const PopulationModel& model);

/// Expected tests per member, the n-free version of expected_tests.
double etm(const Plan& plan, const PopulationModel& model);

/**
 * Expected total duration in time units. weights has k+1 entries, one per
 * stage including the final individual stage; a stage's r joint tests are
 * assumed to run in parallel, so each stage costs its weight once:
 *
 *   n * ( w_1 + sum_{l=2..k+1} w_l * suspected_prob(p, s_{l-1}, r_{l-1}) )
 *
 * Every member pays w_1; later stages are paid only by members still
 * suspected when the stage starts.
 */
double expected_duration(const Plan& plan, const PopulationModel& model,
                         const std::vector<double>& weights);

/// Binary entropy in bits, with the limit convention H(0) = H(1) = 0.
double binary_entropy(double p);

/// Information-theoretic floor on the expected number of tests: H(p) * n.
double counting_bound(const PopulationModel& model);

/**
 * Information gained per expected test, H(p) * n / expected_tests. Equals 1
 * for a scheme matching the counting bound; 0 at p = 0 where there is
 * nothing to learn.
 */
double rate(const Plan& plan, const PopulationModel& model);

/**
 * C(n,s) / (n^s / s!), evaluated in log space. Tends to 1 as n grows with s
 * fixed, which is the sense in which pool-membership draws become
 * independent in a large population. Exposed for the test suite.
 */
double binomial_asymptotic_ratio(long long n, long long s);

/// k+1 ones, the default per-stage time weights for a k-stage plan.
std::vector<double> unit_weights(int k);

/**
 * Core of expected_tests on raw arrays, shared with the optimizer's search
 * loops so a plan's objective value is bit-identical no matter which path
 * computed it. No validation.
 */
double etm_core(const int* r, const int* s, int k, double p);

}  // namespace analytic
}  // namespace gt

#endif  // GT_ANALYTIC_HPP
