// scalar_ineq.hpp
//
// The two pointwise exponential majorants
//
//   abs variant:  e^x <= 1 + x + (|x|/2)  e^{|x|}
//   sq  variant:  e^x <= 1 + x + (x^2/2) e^{|x|}
//
// with slack evaluation, grid/random scanning, and the truncated-series
// comparison sum_{n=3}^{N} x^n/n!  <=  sum_{n=3}^{N} |x|^n / (2 (n-1)!).
//
// Tightness note: the two bounds differ only in the factor |x|/2 vs x^2/2,
// and |x| >= x^2 exactly when |x| <= 1. So the sq variant is the tighter
// majorant for |x| <= 1 and the abs variant is tighter for |x| >= 1, with
// equality at |x| in {0, 1}.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "rng.hpp"
#include "special.hpp"

namespace tailbound {

enum class BoundVariant { Abs, Sq };

inline std::string variant_name(BoundVariant v) {
    return v == BoundVariant::Abs ? "abs" : "sq";
}

// Whether a slack was evaluated directly or in log space.
enum class EvalDomain { Linear, Log };

inline std::string domain_name(EvalDomain d) {
    return d == EvalDomain::Linear ? "linear" : "log";
}

// In the linear domain, exp_value/bound_value are e^x and the majorant;
// slack = bound - exp >= 0 when the inequality holds. In the log domain
// (|x| large enough that the majorant overflows) they are the logarithms
// of the same quantities and slack = log(bound) - x.
struct SlackReport {
    double x = 0.0;
    BoundVariant variant = BoundVariant::Abs;
    double exp_value = 0.0;
    double bound_value = 0.0;
    double slack = 0.0;
    EvalDomain domain = EvalDomain::Linear;
};

// Both majorants overflow near x ~ 697..704 while the inequality itself
// is effortless there; switch to log evaluation well before that.
inline constexpr double kLogDomainCutoff = 690.0;

inline double exp_bound(double x, BoundVariant v) {
    if (!std::isfinite(x)) {
        throw std::domain_error("exp_bound: x must be finite");
    }
    const double ax = std::abs(x);
    const double coeff = (v == BoundVariant::Abs) ? 0.5 * ax : 0.5 * x * x;
    return 1.0 + x + coeff * std::exp(ax);
}

inline SlackReport slack_at(double x, BoundVariant v) {
    if (!std::isfinite(x)) {
        throw std::domain_error("slack_at: x must be finite");
    }
    SlackReport r;
    r.x = x;
    r.variant = v;

    const double ax = std::abs(x);
    if (ax > kLogDomainCutoff) {
        // log(1 + x + c e^{ax}) = ax + log(c) + log1p((1 + x) e^{-ax} / c).
        // For x >= 0 every term is benign; for x <= -kLogDomainCutoff the
        // bound is dominated by c e^{ax} with a (1 + x) e^{-ax}/c correction
        // whose magnitude stays far below 1.
        const double c = (v == BoundVariant::Abs) ? 0.5 * ax : 0.5 * x * x;
        const double log_bound =
            ax + std::log(c) + std::log1p((1.0 + x) * std::exp(-ax) / c);
        r.exp_value = x;
        r.bound_value = log_bound;
        r.slack = log_bound - x;
        r.domain = EvalDomain::Log;
        return r;
    }

    r.exp_value = std::exp(x);
    r.bound_value = exp_bound(x, v);
    r.slack = r.bound_value - r.exp_value;
    r.domain = EvalDomain::Linear;
    return r;
}

// A genuine violation must exceed rounding noise: anything within a few
// ulp of zero is evaluation error, not a counterexample.
inline bool violates(const SlackReport& r) noexcept {
    const double scale = std::max(std::abs(r.exp_value), std::abs(r.bound_value));
    const double tol = 4.0 * (std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale);
    return r.slack < -tol;
}

struct ScanReport {
    std::uint64_t points = 0;
    std::uint64_t violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double argmin_x = 0.0;
    double first_violation_x = std::numeric_limits<double>::quiet_NaN();
};

// Random probe range. The grid covers the region where the inequality is
// tight; random points stress the whole double range that stays clear of
// overflow in the log path.
inline constexpr double kRandomProbeLo = -700.0;
inline constexpr double kRandomProbeHi = 700.0;

// Scans the grid {lo + i*(hi-lo)/N} (N chosen so the spacing is `step`,
// endpoints always included, and 0 is hit exactly for symmetric ranges)
// plus `random_points` seeded uniform draws. `on_point` receives every
// report in a fixed order, so callers can stream rows deterministically.
template <class OnPoint>
ScanReport scan_inequality(double lo, double hi, double step,
                           std::uint64_t random_points, std::uint64_t seed,
                           BoundVariant v, OnPoint&& on_point) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi || !(step > 0.0)) {
        throw std::domain_error("scan_inequality: empty grid");
    }

    ScanReport out;
    auto touch = [&](double x) {
        const SlackReport r = slack_at(x, v);
        ++out.points;
        if (violates(r)) {
            ++out.violations;
            if (std::isnan(out.first_violation_x)) out.first_violation_x = r.x;
        }
        if (r.slack < out.min_slack) {
            out.min_slack = r.slack;
            out.argmin_x = r.x;
        }
        on_point(r);
    };

    const double width = hi - lo;
    const std::uint64_t cells =
        (width == 0.0)
            ? 0
            : static_cast<std::uint64_t>(
                  std::max<long long>(1, std::llround(width / step)));
    for (std::uint64_t i = 0; i <= cells; ++i) {
        const double x =
            (cells == 0)
                ? lo
                : lo + (static_cast<double>(i) * width) / static_cast<double>(cells);
        touch(x);
    }

    SplitRng rng(seed);
    for (std::uint64_t i = 0; i < random_points; ++i) {
        touch(kRandomProbeLo + (kRandomProbeHi - kRandomProbeLo) * rng.next_unit());
    }
    return out;
}

inline ScanReport scan_inequality(double lo, double hi, double step,
                                  std::uint64_t random_points,
                                  std::uint64_t seed, BoundVariant v) {
    return scan_inequality(lo, hi, step, random_points, seed, v,
                           [](const SlackReport&) {});
}

struct SeriesCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// Truncated-tail comparison: for every N >= 3,
//   sum_{n=3}^{N} x^n / n!  <=  sum_{n=3}^{N} |x|^n / (2 (n-1)!).
// Terms are built by the recurrences t_{n+1} = t_n * x/(n+1) and
// u_{n+1} = u_n * |x|/n, so no factorial ever materializes.
inline SeriesCheck partial_series_check(double x, int n_max) {
    if (n_max < 3) {
        throw std::domain_error("partial_series_check: n_max must be at least 3");
    }
    if (!std::isfinite(x)) {
        throw std::domain_error("partial_series_check: x must be finite");
    }
    const double ax = std::abs(x);
    double term_lhs = x * x * x / 6.0;
    double term_rhs = ax * ax * ax / 4.0;
    NeumaierSum lhs;
    NeumaierSum rhs;
    lhs.add(term_lhs);
    rhs.add(term_rhs);
    for (int n = 4; n <= n_max; ++n) {
        term_lhs *= x / static_cast<double>(n);
        term_rhs *= ax / static_cast<double>(n - 1);
        lhs.add(term_lhs);
        rhs.add(term_rhs);
    }
    SeriesCheck out;
    out.lhs = lhs.value();
    out.rhs = rhs.value();
    out.holds = out.lhs <= out.rhs;
    return out;
}

} // namespace tailbound
