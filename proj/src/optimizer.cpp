#include "gt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gt/errors.hpp"

namespace gt {
namespace opt {

namespace {

int default_s_max(const PopulationModel& model) {
    if (model.p <= 0.0) return model.n;
    const double guess = std::max(50.0, std::ceil(10.0 / model.p));
    return static_cast<int>(std::min(static_cast<double>(model.n), guess));
}

struct Candidate {
    std::vector<int> r;
    std::vector<int> s;
    double etm = std::numeric_limits<double>::infinity();
    long long sum_r = 0;
    bool valid = false;
};

// Strict "a should replace b" order implementing the tie-break: smaller
// objective, then fewer total joint tests, then lexicographically smaller
// group sizes. Candidates tying on all three keep the incumbent, which is
// the earlier entry in the deterministic enumeration order.
bool better(const Candidate& a, const Candidate& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.etm != b.etm) return a.etm < b.etm;
    if (a.sum_r != b.sum_r) return a.sum_r < b.sum_r;
    return a.s < b.s;
}

long long sum_of(const std::vector<int>& v) {
    long long total = 0;
    for (int x : v) total += x;
    return total;
}

// Exhaustive scan for one pooling stage. Ascending s with a strict compare
// keeps the smallest optimal size.
Candidate search_k1(const std::vector<int>& r, int s_max, double p, std::uint64_t& evals) {
    Candidate best;
    best.r = r;
    best.sum_r = sum_of(r);
    int s = 0;
    for (int cand = 2; cand <= s_max; ++cand) {
        const double value = analytic::etm_core(r.data(), &cand, 1, p);
        ++evals;
        if (!best.valid || value < best.etm) {
            best.valid = true;
            best.etm = value;
            s = cand;
        }
    }
    best.s = {s};
    return best;
}

// Full grid over two pooling stages, evaluated through etm_core so the
// values match an independent nested-loop enumeration bit for bit.
Candidate search_k2(const std::vector<int>& r, int s_max, double p, std::uint64_t& evals) {
    Candidate best;
    best.r = r;
    best.sum_r = sum_of(r);
    int s_pair[2] = {0, 0};
    int cand[2];
    for (cand[0] = 2; cand[0] <= s_max; ++cand[0]) {
        for (cand[1] = 2; cand[1] <= s_max; ++cand[1]) {
            const double value = analytic::etm_core(r.data(), cand, 2, p);
            ++evals;
            if (!best.valid || value < best.etm) {
                best.valid = true;
                best.etm = value;
                s_pair[0] = cand[0];
                s_pair[1] = cand[1];
            }
        }
    }
    best.s = {s_pair[0], s_pair[1]};
    return best;
}

/**
 * Chain recurrence for three or more pooling stages. The objective couples
 * only adjacent stage sizes, so a backward sweep over (s_l, s_{l+1}) pairs
 * finds the exact integer minimum in O(k * s_max^2) instead of s_max^k:
 *
 *   tail[k-1][s] = suspected_prob(p, s, r_{k-1})
 *   tail[l][s]   = min_t  (r_{l+1}/t) * suspected_prob(p, s, r_l) + tail[l+1][t]
 *   answer       = min_s  r_0/s + tail[0][s]
 *
 * Ascending scans with strict compares make every argmin the smallest
 * optimal choice, so the reconstructed size vector is the
 * lexicographically smallest global minimizer. The winning plan's value is
 * recomputed through etm_core afterwards, since the recurrence accumulates
 * the same sum in a different association order.
 */
Candidate search_chain(const std::vector<int>& r, int s_max, double p, std::uint64_t& evals) {
    const int k = static_cast<int>(r.size());
    const int lo = 2;
    const int width = s_max - lo + 1;
    Candidate best;
    best.r = r;
    best.sum_r = sum_of(r);
    if (width <= 0) return best;

    // sigma[l][i]: suspected probability after stage l with size lo + i.
    std::vector<std::vector<double>> sigma(static_cast<std::size_t>(k));
    for (int l = 0; l < k; ++l) {
        sigma[l].resize(static_cast<std::size_t>(width));
        for (int i = 0; i < width; ++i) {
            sigma[l][static_cast<std::size_t>(i)] = analytic::suspected_prob(p, lo + i, r[l]);
            ++evals;
        }
    }

    std::vector<double> tail = sigma[static_cast<std::size_t>(k - 1)];
    std::vector<double> next(static_cast<std::size_t>(width));
    std::vector<std::vector<int>> choice(static_cast<std::size_t>(k - 1),
                                         std::vector<int>(static_cast<std::size_t>(width)));
    std::vector<double> over_t(static_cast<std::size_t>(width));
    for (int l = k - 2; l >= 0; --l) {
        for (int i = 0; i < width; ++i) {
            over_t[static_cast<std::size_t>(i)] = static_cast<double>(r[l + 1]) / (lo + i);
        }
        for (int i = 0; i < width; ++i) {
            const double carry = sigma[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
            double lowest = std::numeric_limits<double>::infinity();
            int arg = lo;
            for (int j = 0; j < width; ++j) {
                const double value = carry * over_t[static_cast<std::size_t>(j)] +
                                     tail[static_cast<std::size_t>(j)];
                if (value < lowest) {
                    lowest = value;
                    arg = lo + j;
                }
            }
            evals += static_cast<std::uint64_t>(width);
            next[static_cast<std::size_t>(i)] = lowest;
            choice[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] = arg;
        }
        std::swap(tail, next);
    }

    double lowest = std::numeric_limits<double>::infinity();
    int first = lo;
    for (int i = 0; i < width; ++i) {
        const double value = static_cast<double>(r[0]) / (lo + i) + tail[static_cast<std::size_t>(i)];
        ++evals;
        if (value < lowest) {
            lowest = value;
            first = lo + i;
        }
    }

    best.s.resize(static_cast<std::size_t>(k));
    best.s[0] = first;
    for (int l = 1; l < k; ++l) {
        best.s[static_cast<std::size_t>(l)] =
            choice[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(best.s[l - 1] - lo)];
    }
    best.etm = analytic::etm_core(r.data(), best.s.data(), k, p);
    best.valid = true;
    return best;
}

std::uint64_t per_vector_cost(int k, std::uint64_t grid) {
    if (k == 1) return grid;
    if (k == 2) return grid * grid;
    return static_cast<std::uint64_t>(k - 1) * grid * grid +
           static_cast<std::uint64_t>(k + 2) * grid;
}

// r_max^k with saturation, for bounding the free-r enumeration before it
// is materialized.
std::uint64_t saturating_power(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / base) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        out *= base;
    }
    return out;
}

std::vector<std::vector<int>> enumerate_r_vectors(RMode mode, int k, int r_max,
                                                  const std::vector<int>& fixed_r) {
    std::vector<std::vector<int>> out;
    switch (mode) {
        case RMode::PresetFixed:
        case RMode::FixedVector:
            out.push_back(fixed_r);
            break;
        case RMode::CommonR:
            for (int r = 1; r <= r_max; ++r) {
                out.emplace_back(static_cast<std::size_t>(k), r);
            }
            break;
        case RMode::FreeR: {
            std::vector<int> cur(static_cast<std::size_t>(k), 1);
            while (true) {
                out.push_back(cur);
                int pos = k - 1;
                while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == r_max) {
                    cur[static_cast<std::size_t>(pos)] = 1;
                    --pos;
                }
                if (pos < 0) break;
                ++cur[static_cast<std::size_t>(pos)];
            }
            // Smaller total joint-test counts first, so the tie-break's
            // keep-first rule lines up with the preference order.
            std::stable_sort(out.begin(), out.end(),
                             [](const std::vector<int>& a, const std::vector<int>& b) {
                                 const long long sa = sum_of(a);
                                 const long long sb = sum_of(b);
                                 if (sa != sb) return sa < sb;
                                 return a < b;
                             });
            break;
        }
    }
    return out;
}

}  // namespace

OptimizationResult optimize(const OptimizationSpec& spec, const PopulationModel& model) {
    if (!(model.p >= 0.0 && model.p < 1.0)) {
        throw DomainError("optimization requires a defect probability in [0, 1)");
    }
    if (spec.r_max < 1) throw DomainError("r_max must be positive");

    OptimizationResult result;
    int k = 0;
    RMode mode = RMode::FixedVector;
    std::vector<int> fixed_r;
    std::string label;
    if (spec.use_preset) {
        if (spec.preset == Preset::Individual) return result;
        k = preset_stage_count(spec.preset);
        label = preset_name(spec.preset);
        if (preset_requires_r(spec.preset)) {
            mode = RMode::CommonR;
        } else {
            mode = RMode::FixedVector;
            fixed_r = preset_r_pattern(spec.preset);
        }
    } else {
        k = spec.k;
        if (k < 1) throw ValidationError("explicit searches need at least one pooling stage");
        mode = spec.mode;
        if (mode == RMode::PresetFixed) {
            throw ValidationError("preset-fixed joint tests need use_preset set");
        }
        if (mode == RMode::FixedVector) {
            if (spec.fixed_r.size() != static_cast<std::size_t>(k)) {
                throw ArityMismatch("fixed_r holds " + std::to_string(spec.fixed_r.size()) +
                                    " entries for " + std::to_string(k) + " stages");
            }
            for (std::size_t i = 0; i < spec.fixed_r.size(); ++i) {
                if (spec.fixed_r[i] < 1) {
                    throw NonPositiveParameter(static_cast<int>(i) + 1, 'r');
                }
            }
            fixed_r = spec.fixed_r;
        }
    }

    const int s_max = spec.s_max > 0 ? spec.s_max : default_s_max(model);
    if (s_max < 2) return result;  // nobody to pool with
    const std::uint64_t grid = static_cast<std::uint64_t>(s_max) - 1;

    std::uint64_t vector_count = 1;
    if (mode == RMode::CommonR) vector_count = static_cast<std::uint64_t>(spec.r_max);
    if (mode == RMode::FreeR) {
        vector_count = saturating_power(static_cast<std::uint64_t>(spec.r_max), k);
    }
    const std::uint64_t per_vector = per_vector_cost(k, grid);
    if (vector_count > spec.eval_budget / std::max<std::uint64_t>(per_vector, 1)) {
        throw BudgetExceeded("search needs more than " + std::to_string(spec.eval_budget) +
                             " evaluations; raise the budget or tighten the bounds");
    }

    Candidate best;
    for (const std::vector<int>& r : enumerate_r_vectors(mode, k, spec.r_max, fixed_r)) {
        Candidate cand;
        if (k == 1) {
            cand = search_k1(r, s_max, model.p, result.evaluations);
        } else if (k == 2) {
            cand = search_k2(r, s_max, model.p, result.evaluations);
        } else {
            cand = search_chain(r, s_max, model.p, result.evaluations);
        }
        if (better(cand, best)) best = std::move(cand);
    }

    if (!best.valid || !(best.etm < 1.0)) return result;

    Plan plan;
    plan.label = label;
    plan.stages.reserve(best.r.size());
    for (std::size_t i = 0; i < best.r.size(); ++i) {
        plan.stages.push_back(Stage{best.r[i], best.s[i]});
    }
    result.plan = std::move(plan);
    result.etm_value = best.etm;
    result.feasible = true;
    return result;
}

namespace {

/**
 * First-order conditions of the continuous expected-tests-per-member
 * relaxation, folded into a one-dimensional residual in the first stage
 * size. Writing sig_l and dsig_l for the suspected probability after stage
 * l and its derivative in the stage size, stationarity in s_1..s_{k-1}
 * pins each later size in terms of the earlier ones:
 *
 *   s_2     = r_2 * dsig_1(s_1) * s_1^2 / r_1
 *   s_{l+1} = r_{l+1} * dsig_l(s_l) * s_l^2 / (r_l * sig_{l-1}(s_{l-1}))
 *
 * and stationarity in the last size becomes the residual
 *
 *   R(s_1) = dsig_k(s_k) - r_k * sig_{k-1}(s_{k-1}) / s_k^2
 *
 * (for one pooling stage, R(s_1) = dsig_1(s_1) - r_1 / s_1^2). An interior
 * optimum exists exactly when R reaches zero with the whole cascade
 * staying at sizes >= 2; as p grows the two roots of R merge and vanish,
 * which is the point where pooling stops being meaningful.
 */
double cascade_residual(const std::vector<int>& r, double p, double s1, bool& valid) {
    const int k = static_cast<int>(r.size());
    const double q = 1.0 - p;
    const double u = -std::log(q);

    auto sig = [&](int l, double s) {
        return p + q * std::pow(1.0 - std::exp(-u * (s - 1.0)), r[static_cast<std::size_t>(l)]);
    };
    auto dsig = [&](int l, double s) {
        const double rl = r[static_cast<std::size_t>(l)];
        return q * rl * std::pow(1.0 - std::exp(-u * (s - 1.0)), rl - 1.0) * u *
               std::exp(-u * (s - 1.0));
    };

    valid = true;
    if (k == 1) {
        return dsig(0, s1) - r[0] / (s1 * s1);
    }

    std::vector<double> s(static_cast<std::size_t>(k));
    s[0] = s1;
    s[1] = r[1] * dsig(0, s[0]) * s[0] * s[0] / r[0];
    for (int l = 2; l < k; ++l) {
        s[static_cast<std::size_t>(l)] = r[l] * dsig(l - 1, s[l - 1]) * s[l - 1] * s[l - 1] /
                                         (r[l - 1] * sig(l - 2, s[l - 2]));
    }
    for (int l = 1; l < k; ++l) {
        const double sl = s[static_cast<std::size_t>(l)];
        if (!std::isfinite(sl) || sl < 2.0 || sl > 1e7) {
            valid = false;
            return -std::numeric_limits<double>::infinity();
        }
    }
    return dsig(k - 1, s[static_cast<std::size_t>(k - 1)]) -
           r[k - 1] * sig(k - 2, s[static_cast<std::size_t>(k - 2)]) /
               (s[static_cast<std::size_t>(k - 1)] * s[static_cast<std::size_t>(k - 1)]);
}

bool interior_optimum_exists(const std::vector<int>& r, double p) {
    if (p <= 0.0 || p >= 1.0) return false;
    const double end = std::max(300.0, 60.0 / std::sqrt(p));
    const double step = 0.05;

    double best_s = 0.0;
    double best_res = -std::numeric_limits<double>::infinity();
    bool any_valid = false;
    for (double s1 = 2.0; s1 <= end; s1 += step) {
        bool valid = false;
        const double res = cascade_residual(r, p, s1, valid);
        if (!valid) continue;
        any_valid = true;
        if (res >= 0.0) return true;
        if (res > best_res) {
            best_res = res;
            best_s = s1;
        }
    }
    if (!any_valid) return false;

    // Near the fold the positive bump of R is narrower than the coarse
    // step, so polish the maximum with a golden-section search around the
    // best coarse point.
    double lo = std::max(2.0, best_s - step);
    double hi = std::min(end, best_s + step);
    const double gold = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int iter = 0; iter < 80; ++iter) {
        const double m1 = hi - gold * (hi - lo);
        const double m2 = lo + gold * (hi - lo);
        bool v1 = false;
        bool v2 = false;
        const double f1 = cascade_residual(r, p, m1, v1);
        const double f2 = cascade_residual(r, p, m2, v2);
        const double g1 = v1 ? f1 : -std::numeric_limits<double>::infinity();
        const double g2 = v2 ? f2 : -std::numeric_limits<double>::infinity();
        if (g1 >= 0.0 || g2 >= 0.0) return true;
        if (g1 < g2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    return false;
}

}  // namespace

double feasibility_threshold(Preset preset, const OptimizationSpec& spec, double p_step,
                             double p_end) {
    if (!(p_step > 0.0)) throw DomainError("p_step must be positive");
    if (preset == Preset::Individual) return 0.0;

    std::vector<std::vector<int>> patterns;
    if (preset_requires_r(preset)) {
        if (spec.r_max < 1) throw DomainError("r_max must be positive");
        for (int r = 1; r <= spec.r_max; ++r) patterns.push_back({r});
    } else {
        patterns.push_back(preset_r_pattern(preset));
    }

    // p = 0 always works: one full-size pool clears everyone, so the
    // threshold starts there and advances while an interior optimum holds.
    double last = 0.0;
    for (long i = 1;; ++i) {
        const double p = static_cast<double>(i) * p_step;
        if (p > p_end + 1e-12 || p >= 1.0) break;
        for (const std::vector<int>& r : patterns) {
            if (interior_optimum_exists(r, p)) {
                last = p;
                break;
            }
        }
    }
    return last;
}

}  // namespace opt
}  // namespace gt
