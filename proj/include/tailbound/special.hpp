// special.hpp
//
// Numeric support: compensated summation, the regularized incomplete beta
// function with its inverse, and exact (Clopper-Pearson) binomial
// confidence limits built on top of it.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

namespace tailbound {

// Neumaier variant of Kahan summation: tracks a running compensation term
// so that adding values of wildly different magnitude loses almost nothing.
class NeumaierSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// Upper quantile of the standard normal at 99% (used for one-sided
// mean +- z * se limits on MGF estimates).
inline constexpr double kNormalUpper99 = 2.3263478740408408;

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the regularized incomplete beta, evaluated with
// the modified Lentz algorithm. Converges quickly for x < (a+1)/(a+b+2);
// the public wrapper reflects the other half of the domain onto this one.
inline double ibeta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= 400; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;

        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return h;
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("reg_inc_beta: shape parameters must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::ibeta_cf(a, b, x) / a;
    }
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                     detail::ibeta_cf(b, a, 1.0 - x) / b;
}

// Inverse of I_x(a, b) in x, by bisection. The function is strictly
// increasing on [0, 1], so 120 halvings pin the root to full precision;
// robustness matters more than speed at the call volumes used here.
inline double reg_inc_beta_inv(double a, double b, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("reg_inc_beta_inv: p must lie in [0, 1]");
    }
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (reg_inc_beta(a, b, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 0.5 * std::numeric_limits<double>::epsilon() * (lo + hi)) break;
    }
    return 0.5 * (lo + hi);
}

// Exact binomial confidence limits (Clopper-Pearson). "confidence" is the
// one-sided coverage level, e.g. 0.99 for a 99% upper limit.

inline void check_counts(std::uint64_t hits, std::uint64_t trials, double confidence) {
    if (trials == 0) {
        throw std::domain_error("binomial limits: trials must be positive");
    }
    if (hits > trials) {
        throw std::domain_error("binomial limits: hits exceed trials");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::domain_error("binomial limits: confidence must lie in (0, 1)");
    }
}

inline double binom_upper_limit(std::uint64_t hits, std::uint64_t trials,
                                double confidence) {
    check_counts(hits, trials, confidence);
    if (hits == trials) return 1.0;
    const double h = static_cast<double>(hits);
    const double n = static_cast<double>(trials);
    return reg_inc_beta_inv(h + 1.0, n - h, confidence);
}

inline double binom_lower_limit(std::uint64_t hits, std::uint64_t trials,
                                double confidence) {
    check_counts(hits, trials, confidence);
    if (hits == 0) return 0.0;
    const double h = static_cast<double>(hits);
    const double n = static_cast<double>(trials);
    return reg_inc_beta_inv(h, n - h + 1.0, 1.0 - confidence);
}

// Equal-tailed two-sided interval at overall level `level`.
inline std::pair<double, double> binom_interval(std::uint64_t hits,
                                                std::uint64_t trials,
                                                double level) {
    const double side = 0.5 * (1.0 + level);
    return {binom_lower_limit(hits, trials, side),
            binom_upper_limit(hits, trials, side)};
}

} // namespace tailbound
