// tail_bounds.hpp
//
// The bound calculators. For an M-acceptable family with marginal constant
// K = sqrt(E|X|^2) * E e^{delta |X|}:
//
//   MGF bound:   E e^{lambda (X - EX)} <= exp(K lambda),   0 < lambda <= delta/2
//   tail bound:  P(|sum (X_i - EX_i)| > n eps) <= 2M exp(-(n delta / 2)(eps - K)),
//                eps >= K
//   rate form:   eps_n = n^{alpha-1} + K gives bound 2M exp(-(delta/2) n^alpha)
//   reference:   2 exp(-alpha log n) at eps = 2 (K_ref alpha log n / n)^{1/2},
//                with K_ref = 2K
//
// Everything is carried in log-domain: the rate-form bound underflows a
// double for modest n, while its logarithm stays exact.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "distributions.hpp"

namespace tailbound {

struct TailBoundQuery {
    std::uint64_t n = 1;
    double epsilon = 0.0;
    double delta = 0.0;
    double M = 1.0;
    double K = 0.0;
};

struct RateQuery {
    std::uint64_t n = 1;
    double alpha = 1.0;
    double delta = 0.0;
    double M = 1.0;
    double K = 0.0;
};

struct BoundResult {
    double log_bound = 0.0;
    double bound_clipped = 1.0;
    double lambda_star = 0.0;
};

// The MGF bound as displayed is exp(K lambda); its derivation actually
// yields exp(K lambda / 2). The stated form is the default everywhere and
// the tighter one is opt-in, so results are comparable with the source.
enum class LemmaForm { Stated, ProofTight };

namespace detail {

inline void check_query_common(std::uint64_t n, double delta, double M, double K,
                               const char* who) {
    if (n < 1) {
        throw std::domain_error(std::string(who) + ": n must be at least 1");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::domain_error(std::string(who) + ": delta must be positive");
    }
    if (!(M >= 1.0)) {
        throw std::domain_error(std::string(who) +
                                ": M must be at least 1 (acceptability at "
                                "lambda = 0 forces M >= 1)");
    }
    if (!(K > 0.0) || !std::isfinite(K)) {
        throw std::domain_error(std::string(who) + ": K must be positive");
    }
}

} // namespace detail

inline double lemma_log_bound(double K, double lambda, double delta,
                              LemmaForm form = LemmaForm::Stated) {
    if (!(K > 0.0)) {
        throw std::domain_error("lemma_log_bound: K must be positive");
    }
    if (!(lambda > 0.0) || !(lambda <= 0.5 * delta)) {
        throw std::domain_error(
            "lemma_log_bound: lambda must lie in (0, delta/2]");
    }
    const double log_bound = K * lambda;
    return form == LemmaForm::Stated ? log_bound : 0.5 * log_bound;
}

inline BoundResult theorem1_log_bound(const TailBoundQuery& q) {
    detail::check_query_common(q.n, q.delta, q.M, q.K, "theorem1_log_bound");
    if (!(q.epsilon >= q.K)) {
        throw std::domain_error(
            "theorem1_log_bound: epsilon must be at least K (the tail bound "
            "holds for any eps >= K)");
    }
    BoundResult r;
    r.lambda_star = 0.5 * q.delta;
    r.log_bound = std::log(2.0 * q.M) -
                  (static_cast<double>(q.n) * q.delta * 0.5) * (q.epsilon - q.K);
    r.bound_clipped = r.log_bound >= 0.0 ? 1.0 : std::exp(r.log_bound);
    return r;
}

struct RateBound {
    BoundResult bound;
    double epsilon_n = 0.0;
};

inline RateBound theorem2_log_bound(const RateQuery& q) {
    detail::check_query_common(q.n, q.delta, q.M, q.K, "theorem2_log_bound");
    if (!(q.alpha > 0.0)) {
        throw std::domain_error("theorem2_log_bound: alpha must be positive");
    }
    const double n = static_cast<double>(q.n);
    RateBound r;
    r.epsilon_n = std::pow(n, q.alpha - 1.0) + q.K;
    r.bound.lambda_star = 0.5 * q.delta;
    r.bound.log_bound = std::log(2.0 * q.M) - 0.5 * q.delta * std::pow(n, q.alpha);
    r.bound.bound_clipped =
        r.bound.log_bound >= 0.0 ? 1.0 : std::exp(r.bound.log_bound);
    return r;
}

struct ReferenceBound {
    double log_bound = 0.0;
    double epsilon = 0.0;
};

// The rate-alpha reference bound 2 n^{-alpha}, achieved at
// eps = 2 (k_ref alpha log n / n)^{1/2} with k_ref twice this library's K.
inline ReferenceBound sung_log_bound(std::uint64_t n, double alpha,
                                     double k_sung) {
    if (n < 2) {
        throw std::domain_error("sung_log_bound: n must be at least 2");
    }
    if (!(alpha > 0.0)) {
        throw std::domain_error("sung_log_bound: alpha must be positive");
    }
    if (!(k_sung > 0.0)) {
        throw std::domain_error("sung_log_bound: k_sung must be positive");
    }
    const double ln_n = std::log(static_cast<double>(n));
    ReferenceBound r;
    r.log_bound = std::log(2.0) - alpha * ln_n;
    r.epsilon = 2.0 * std::sqrt(k_sung * alpha * ln_n / static_cast<double>(n));
    return r;
}

// One-sided Chernoff exponent log M - lambda n (eps - K), linear in lambda.
// For eps > K it is strictly decreasing, so the optimum over (0, delta/2]
// sits at the right endpoint.
inline double chernoff_log_curve(double lambda, std::uint64_t n, double epsilon,
                                 double K, double M) {
    return std::log(M) - lambda * static_cast<double>(n) * (epsilon - K);
}

struct CompareRow {
    std::uint64_t n = 0;
    double alpha = 0.0;
    double delta = 0.0;
    double eps_new = 0.0;
    double log_bound_new = 0.0;
    double eps_sung = 0.0;
    double log_bound_sung = 0.0;
    double k_ratio = 2.0;
    // Both exponents evaluated at one shared eps = k_sung, where the smaller
    // constant K must win: log_new_at_shared <= log_ref_at_shared.
    double eps_shared = 0.0;
    double log_new_at_shared = 0.0;
    double log_ref_at_shared = 0.0;
};

inline std::vector<CompareRow> compare_bounds(const DistributionSpec& dist,
                                              double delta,
                                              const std::vector<std::uint64_t>& n_grid,
                                              double alpha, double M) {
    if (n_grid.empty()) {
        throw std::domain_error("compare_bounds: n_grid must be nonempty");
    }
    const MomentProfile prof = moment_profile(dist, delta);
    std::vector<CompareRow> rows;
    rows.reserve(n_grid.size());
    for (const std::uint64_t n : n_grid) {
        const RateBound rb =
            theorem2_log_bound({n, alpha, delta, M, prof.k_constant});
        const ReferenceBound ref = sung_log_bound(n, alpha, prof.k_sung);
        CompareRow row;
        row.n = n;
        row.alpha = alpha;
        row.delta = delta;
        row.eps_new = rb.epsilon_n;
        row.log_bound_new = rb.bound.log_bound;
        row.eps_sung = ref.epsilon;
        row.log_bound_sung = ref.log_bound;
        row.k_ratio = prof.k_sung / prof.k_constant;
        row.eps_shared = prof.k_sung;
        row.log_new_at_shared =
            theorem1_log_bound({n, row.eps_shared, delta, M, prof.k_constant})
                .log_bound;
        row.log_ref_at_shared = std::log(2.0 * M);
        rows.push_back(row);
    }
    return rows;
}

} // namespace tailbound
