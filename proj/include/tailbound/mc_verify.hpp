// mc_verify.hpp
//
// Seeded Monte Carlo estimation of tails and MGFs with exact binomial
// confidence limits, plus the verification suites that confront the MGF
// bound and the tail bound with simulation or exact enumeration. Verdicts
// are designed so statistical noise cannot manufacture a false FAIL: a row
// fails only when the lower confidence limit of the estimate exceeds the
// bound.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "exact.hpp"
#include "families.hpp"
#include "parallel.hpp"
#include "special.hpp"
#include "tail_bounds.hpp"

namespace tailbound {

enum class CiKind { TwoSided, OneSidedUpper };

struct TailEstimate {
    std::uint64_t hits = 0;
    std::uint64_t reps = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double ci_level = 0.99;
    std::uint64_t seed = 0;
    CiKind ci_kind = CiKind::TwoSided;

    static TailEstimate from_counts(std::uint64_t hits, std::uint64_t reps,
                                    double ci_level, CiKind kind,
                                    std::uint64_t seed) {
        TailEstimate e;
        e.hits = hits;
        e.reps = reps;
        e.p_hat = static_cast<double>(hits) / static_cast<double>(reps);
        e.ci_level = ci_level;
        e.seed = seed;
        e.ci_kind = kind;
        if (kind == CiKind::TwoSided) {
            const auto [lo, hi] = binom_interval(hits, reps, ci_level);
            e.ci_low = lo;
            e.ci_high = hi;
        } else {
            e.ci_low = 0.0;
            e.ci_high = binom_upper_limit(hits, reps, ci_level);
        }
        return e;
    }
};

// P(|sum_i X_i - sum_i EX_i| > n * epsilon) by replication. Stream id =
// replication index, partials merged in block order: bit-identical for any
// worker count.
inline TailEstimate estimate_tail(const FamilySpec& spec, double epsilon,
                                  std::uint64_t reps, std::uint64_t seed,
                                  unsigned workers = 1, double ci_level = 0.99,
                                  CiKind kind = CiKind::TwoSided) {
    validate_family(spec);
    if (reps < 1000) {
        throw std::domain_error("estimate_tail: reps must be at least 10^3");
    }
    const FamilySampler sampler(spec);
    const std::uint64_t n = sampler.size();
    NeumaierSum center_sum;
    for (std::uint64_t i = 0; i < n; ++i) {
        center_sum.add(marginal_mean(spec, i));
    }
    const double center = center_sum.value();
    const double threshold = static_cast<double>(n) * epsilon;

    const auto partials = run_blocks<std::uint64_t>(
        reps, workers, [&](std::uint64_t, BlockRange range) {
            FamilySampler local = sampler;
            std::vector<double> x;
            std::uint64_t hits = 0;
            for (std::uint64_t r = range.begin; r < range.end; ++r) {
                SplitRng rng(seed, r);
                local.draw(rng, x);
                NeumaierSum s;
                for (const double v : x) s.add(v);
                if (std::abs(s.value() - center) > threshold) ++hits;
            }
            return hits;
        });

    std::uint64_t hits = 0;
    for (const std::uint64_t h : partials) hits += h;
    return TailEstimate::from_counts(hits, reps, ci_level, kind, seed);
}

struct MgfEstimate {
    double mean = 0.0;
    double se = 0.0;
    bool heavy_tail_warning = false;
};

// Sample mean of e^{lambda (X - centered * EX)} with CLT standard error.
// The warning flags empirical excess kurtosis beyond 6, where the CLT
// interval for the mean becomes optimistic at moderate rep counts.
inline MgfEstimate estimate_mgf(const DistributionSpec& dist, double lambda,
                                bool centered, std::uint64_t reps,
                                std::uint64_t seed, unsigned workers = 1) {
    validate(dist);
    if (reps < 1000) {
        throw std::domain_error("estimate_mgf: reps must be at least 10^3");
    }
    const double shift = centered ? mean(dist) : 0.0;

    struct Partial {
        double s1 = 0.0;
        double s2 = 0.0;
        double s3 = 0.0;
        double s4 = 0.0;
    };
    const auto partials = run_blocks<Partial>(
        reps, workers, [&](std::uint64_t, BlockRange range) {
            Partial p;
            NeumaierSum s1;
            NeumaierSum s2;
            NeumaierSum s3;
            NeumaierSum s4;
            for (std::uint64_t r = range.begin; r < range.end; ++r) {
                SplitRng rng(seed, r);
                const double w =
                    std::exp(lambda * (sample(dist, rng) - shift));
                s1.add(w);
                const double w2 = w * w;
                s2.add(w2);
                s3.add(w2 * w);
                s4.add(w2 * w2);
            }
            p.s1 = s1.value();
            p.s2 = s2.value();
            p.s3 = s3.value();
            p.s4 = s4.value();
            return p;
        });

    NeumaierSum t1;
    NeumaierSum t2;
    NeumaierSum t3;
    NeumaierSum t4;
    for (const Partial& p : partials) {
        t1.add(p.s1);
        t2.add(p.s2);
        t3.add(p.s3);
        t4.add(p.s4);
    }
    const double inv = 1.0 / static_cast<double>(reps);
    const double m1 = t1.value() * inv;
    const double m2 = t2.value() * inv;
    const double m3 = t3.value() * inv;
    const double m4 = t4.value() * inv;
    const double var = std::max(0.0, m2 - m1 * m1);

    MgfEstimate out;
    out.mean = m1;
    out.se = std::sqrt(var * inv);
    if (var > 0.0) {
        const double mu4 = m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 -
                           3.0 * m1 * m1 * m1 * m1;
        out.heavy_tail_warning = mu4 / (var * var) - 3.0 > 6.0;
    }
    return out;
}

enum class Verdict { Pass, Fail, Vacuous };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        default: return "VACUOUS";
    }
}

struct VerificationRow {
    std::string id;
    double lhs = 0.0;
    double lhs_ci_low = 0.0;
    double lhs_ci_high = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    Verdict verdict = Verdict::Pass;
};

struct LemmaRow {
    std::string dist;
    double delta = 0.0;
    double lambda = 0.0;
    bool exact = false;
    VerificationRow row;
};

// One row per lambda: centered MGF (exact for finite support, otherwise a
// 99% CLT interval around the Monte Carlo mean) against exp(K lambda).
inline std::vector<LemmaRow> verify_lemma(const DistributionSpec& dist,
                                          double delta,
                                          const std::vector<double>& lambda_grid,
                                          std::uint64_t reps, std::uint64_t seed,
                                          unsigned workers = 1,
                                          LemmaForm form = LemmaForm::Stated) {
    const MomentProfile prof = moment_profile(dist, delta);
    const bool exact = is_finite_support(dist);
    std::vector<LemmaRow> rows;
    rows.reserve(lambda_grid.size());
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        const double lambda = lambda_grid[i];
        if (!(lambda > 0.0) || !(lambda <= 0.5 * delta)) {
            throw std::domain_error(
                "verify_lemma: lambda grid must lie in (0, delta/2]");
        }
        LemmaRow r;
        r.dist = name(dist);
        r.delta = delta;
        r.lambda = lambda;
        r.exact = exact;
        r.row.id = r.dist + ";lambda=" + fmt_double(lambda);
        r.row.rhs = std::exp(lemma_log_bound(prof.k_constant, lambda, delta, form));
        if (exact) {
            const double v = exact_mgf(dist, lambda, true);
            r.row.lhs = v;
            r.row.lhs_ci_low = v;
            r.row.lhs_ci_high = v;
        } else {
            const MgfEstimate est =
                estimate_mgf(dist, lambda, true, reps, derive_seed(seed, i),
                             workers);
            r.row.lhs = est.mean;
            r.row.lhs_ci_low = est.mean - kNormalUpper99 * est.se;
            r.row.lhs_ci_high = est.mean + kNormalUpper99 * est.se;
        }
        r.row.margin = r.row.rhs - r.row.lhs_ci_high;
        r.row.verdict =
            r.row.lhs_ci_low > r.row.rhs ? Verdict::Fail : Verdict::Pass;
        rows.push_back(std::move(r));
    }
    return rows;
}

struct Theorem1Row {
    std::string family;
    std::uint64_t n = 0;
    double delta = 0.0;
    double epsilon = 0.0;
    double k = 0.0;
    double m = 1.0;
    double log_bound = 0.0;
    bool exact = false;
    VerificationRow row;
};

namespace detail {

inline MomentProfile identical_marginal_profile(const FamilySpec& spec,
                                                double delta) {
    const std::uint64_t n = family_size(spec);
    const MomentProfile first = marginal_profile(spec, 0, delta);
    for (std::uint64_t i = 1; i < n; ++i) {
        const MomentProfile p = marginal_profile(spec, i, delta);
        if (std::abs(p.mean - first.mean) > 1e-12 ||
            std::abs(p.second_abs_moment - first.second_abs_moment) > 1e-12 ||
            std::abs(p.abs_exp_moment - first.abs_exp_moment) > 1e-12) {
            throw std::domain_error(
                "verify_theorem1: family marginals must be identically "
                "distributed");
        }
    }
    return first;
}

// Exact tail where enumeration is feasible: i.i.d. finite-support sums, and
// multinomial leading-coordinate sums, which are Binomial(trials, q) with
// q the total probability of the taken cells.
inline bool exact_tail_lhs(const FamilySpec& spec, double epsilon,
                           double marginal_mean_value, double& out) {
    const std::uint64_t n = family_size(spec);
    if (const auto* iid = std::get_if<IidFamily>(&spec.kind)) {
        if (!is_finite_support(iid->dist)) return false;
        const std::size_t atoms = support_table(iid->dist).values.size();
        if (iid->n * atoms > kEnumerationCap) return false;
        const ExactPMF pmf = exact_sum_pmf(iid->dist, iid->n);
        out = exact_tail(pmf, static_cast<double>(n) * marginal_mean_value,
                         static_cast<double>(n) * epsilon);
        return true;
    }
    if (const auto* mn = std::get_if<MultinomialCoords>(&spec.kind)) {
        NeumaierSum qsum;
        for (std::uint64_t c = 0; c < mn->take; ++c) qsum.add(mn->probs[c]);
        const double q = qsum.value();
        if (!(q > 0.0 && q < 1.0)) return false;
        if (mn->trials * 2 > kEnumerationCap) return false;
        const ExactPMF pmf = exact_sum_pmf(Bernoulli{q}, mn->trials);
        const double center = static_cast<double>(mn->trials) * q;
        out = exact_tail(pmf, center, static_cast<double>(n) * epsilon);
        return true;
    }
    return false;
}

} // namespace detail

// One row per epsilon: two-sided tail of the centered coordinate sum
// (exact where enumeration applies, Monte Carlo otherwise) against
// 2M exp(-(n delta / 2)(eps - K)).
inline std::vector<Theorem1Row> verify_theorem1(
    const FamilySpec& spec, double delta, const std::vector<double>& epsilon_grid,
    std::uint64_t reps, std::uint64_t seed, unsigned workers = 1) {
    validate_family(spec);
    const MomentProfile prof = detail::identical_marginal_profile(spec, delta);
    const std::uint64_t n = family_size(spec);

    std::vector<Theorem1Row> rows;
    rows.reserve(epsilon_grid.size());
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        const double eps = epsilon_grid[i];
        if (!(eps >= prof.k_constant)) {
            throw std::domain_error(
                "verify_theorem1: epsilon must be at least K (the tail bound "
                "holds for any eps >= K)");
        }
        Theorem1Row r;
        r.family = family_name(spec);
        r.n = n;
        r.delta = delta;
        r.epsilon = eps;
        r.k = prof.k_constant;
        r.m = spec.declared_m;

        const BoundResult bound = theorem1_log_bound(
            {n, eps, delta, spec.declared_m, prof.k_constant});
        r.log_bound = bound.log_bound;
        r.row.id = r.family + ";eps=" + fmt_double(eps);
        r.row.rhs = bound.bound_clipped;

        double exact_value = 0.0;
        if (detail::exact_tail_lhs(spec, eps, prof.mean, exact_value)) {
            r.exact = true;
            r.row.lhs = exact_value;
            r.row.lhs_ci_low = exact_value;
            r.row.lhs_ci_high = exact_value;
        } else {
            const TailEstimate est =
                estimate_tail(spec, eps, reps, derive_seed(seed, i), workers);
            r.row.lhs = est.p_hat;
            r.row.lhs_ci_low = binom_lower_limit(est.hits, est.reps, 0.99);
            r.row.lhs_ci_high = binom_upper_limit(est.hits, est.reps, 0.99);
        }
        r.row.margin = r.row.rhs - r.row.lhs_ci_high;
        if (r.row.rhs >= 1.0) {
            r.row.verdict = Verdict::Vacuous;
        } else if (r.row.lhs_ci_low > r.row.rhs) {
            r.row.verdict = Verdict::Fail;
        } else {
            r.row.verdict = Verdict::Pass;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace tailbound
