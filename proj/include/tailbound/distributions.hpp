// distributions.hpp
//
// Marginal distribution catalog: closed-form moments, the constant
// K = sqrt(E|X|^2) * E e^{delta |X|} it feeds, moment generating functions,
// and deterministic sampling. Every closed form has an independent check in
// the test suite (quadrature-grade fixtures or empirical estimates).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "format.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace tailbound {

struct Rademacher {
    bool operator==(const Rademacher&) const = default;
};

struct Uniform {
    double a = -1.0;
    double b = 1.0;
    bool operator==(const Uniform&) const = default;
};

struct Bernoulli {
    double p = 0.5;
    bool operator==(const Bernoulli&) const = default;
};

// Bernoulli(p) shifted to mean zero: takes -p and 1-p.
struct CenteredBernoulli {
    double p = 0.5;
    bool operator==(const CenteredBernoulli&) const = default;
};

struct Laplace {
    double scale = 1.0;
    bool operator==(const Laplace&) const = default;
};

// Centered normal; general means appear only as dependent-family marginals.
struct Gaussian {
    double sigma = 1.0;
    bool operator==(const Gaussian&) const = default;
};

struct DiscreteTable {
    std::vector<double> values;
    std::vector<double> probs;
    bool operator==(const DiscreteTable&) const = default;
};

using DistributionSpec = std::variant<Rademacher, Uniform, Bernoulli,
                                      CenteredBernoulli, Laplace, Gaussian,
                                      DiscreteTable>;

inline constexpr double kProbSumTol = 1e-12;

inline void validate(const DistributionSpec& dist) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                if (!(d.a < d.b)) {
                    throw std::invalid_argument("uniform: requires a < b");
                }
                if (!std::isfinite(d.a) || !std::isfinite(d.b)) {
                    throw std::invalid_argument("uniform: endpoints must be finite");
                }
            } else if constexpr (std::is_same_v<T, Bernoulli> ||
                                 std::is_same_v<T, CenteredBernoulli>) {
                if (!(d.p > 0.0 && d.p < 1.0)) {
                    throw std::invalid_argument(
                        "bernoulli: requires p in (0, 1)");
                }
            } else if constexpr (std::is_same_v<T, Laplace>) {
                if (!(d.scale > 0.0) || !std::isfinite(d.scale)) {
                    throw std::invalid_argument("laplace: requires scale > 0");
                }
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                if (!(d.sigma > 0.0) || !std::isfinite(d.sigma)) {
                    throw std::invalid_argument("gaussian: requires sigma > 0");
                }
            } else if constexpr (std::is_same_v<T, DiscreteTable>) {
                if (d.values.empty() || d.values.size() != d.probs.size()) {
                    throw std::invalid_argument(
                        "discrete_table: values and probs must be nonempty and "
                        "the same length");
                }
                NeumaierSum total;
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    if (!std::isfinite(d.values[i])) {
                        throw std::invalid_argument(
                            "discrete_table: values must be finite");
                    }
                    if (!(d.probs[i] >= 0.0)) {
                        throw std::invalid_argument(
                            "discrete_table: probs must be nonnegative");
                    }
                    total.add(d.probs[i]);
                }
                if (std::abs(total.value() - 1.0) > kProbSumTol) {
                    throw std::invalid_argument(
                        "discrete_table: probs must sum to 1 within 1e-12");
                }
                for (std::size_t i = 0; i + 1 < d.values.size(); ++i) {
                    for (std::size_t j = i + 1; j < d.values.size(); ++j) {
                        if (d.values[i] == d.values[j]) {
                            throw std::invalid_argument(
                                "discrete_table: values must be distinct");
                        }
                    }
                }
            }
        },
        dist);
}

// Stable display name; parameters use shortest round-trip form and ';' as
// the separator so names stay CSV-safe.
inline std::string name(const DistributionSpec& dist) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return "rademacher";
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return "uniform(" + fmt_double(d.a) + ";" + fmt_double(d.b) + ")";
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return "bernoulli(" + fmt_double(d.p) + ")";
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return "centered_bernoulli(" + fmt_double(d.p) + ")";
            } else if constexpr (std::is_same_v<T, Laplace>) {
                return "laplace(" + fmt_double(d.scale) + ")";
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return "gaussian(" + fmt_double(d.sigma) + ")";
            } else {
                std::string out = "discrete_table{";
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    if (i) out += ';';
                    out += fmt_double(d.values[i]);
                    out += ':';
                    out += fmt_double(d.probs[i]);
                }
                out += '}';
                return out;
            }
        },
        dist);
}

inline double mean(const DistributionSpec& dist) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return 0.5 * (d.a + d.b);
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return d.p;
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Laplace>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return 0.0;
            } else {
                NeumaierSum s;
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    s.add(d.values[i] * d.probs[i]);
                }
                return s.value();
            }
        },
        dist);
}

inline double second_abs_moment(const DistributionSpec& dist) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return (d.a * d.a + d.a * d.b + d.b * d.b) / 3.0;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return d.p;
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return d.p * (1.0 - d.p);
            } else if constexpr (std::is_same_v<T, Laplace>) {
                return 2.0 * d.scale * d.scale;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return d.sigma * d.sigma;
            } else {
                NeumaierSum s;
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    s.add(d.values[i] * d.values[i] * d.probs[i]);
                }
                return s.value();
            }
        },
        dist);
}

inline double abs_mean(const DistributionSpec& dist) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return (d.b * std::abs(d.b) - d.a * std::abs(d.a)) /
                       (2.0 * (d.b - d.a));
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return d.p;
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return 2.0 * d.p * (1.0 - d.p);
            } else if constexpr (std::is_same_v<T, Laplace>) {
                return d.scale;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return d.sigma * std::sqrt(2.0 / 3.14159265358979323846);
            } else {
                NeumaierSum s;
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    s.add(std::abs(d.values[i]) * d.probs[i]);
                }
                return s.value();
            }
        },
        dist);
}

// E e^{delta |X|} for X ~ N(mu, sigma^2), including the point mass
// sigma = 0; used by the dependent-family marginals.
inline double gaussian_abs_exp_moment(double mu, double sigma, double delta) {
    if (!(delta > 0.0)) {
        throw std::domain_error("abs_exp_moment: requires delta > 0");
    }
    if (sigma == 0.0) return std::exp(delta * std::abs(mu));
    const double half = 0.5 * delta * delta * sigma * sigma;
    const double ratio = mu / sigma;
    return std::exp(half + delta * mu) * normal_cdf(ratio + delta * sigma) +
           std::exp(half - delta * mu) * normal_cdf(delta * sigma - ratio);
}

// E e^{delta |X|}; throws when the integral diverges (Laplace with
// delta * scale >= 1).
inline double abs_exp_moment(const DistributionSpec& dist, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::domain_error("abs_exp_moment: requires delta > 0");
    }
    return std::visit(
        [delta](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return std::exp(delta);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                const double w = delta * (d.b - d.a);
                if (d.a >= 0.0) {
                    return (std::exp(delta * d.b) - std::exp(delta * d.a)) / w;
                }
                if (d.b <= 0.0) {
                    return (std::exp(-delta * d.a) - std::exp(-delta * d.b)) / w;
                }
                return (std::exp(-delta * d.a) + std::exp(delta * d.b) - 2.0) / w;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return 1.0 - d.p + d.p * std::exp(delta);
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return (1.0 - d.p) * std::exp(delta * d.p) +
                       d.p * std::exp(delta * (1.0 - d.p));
            } else if constexpr (std::is_same_v<T, Laplace>) {
                if (delta * d.scale >= 1.0) {
                    throw std::domain_error(
                        "abs_exp_moment diverges for laplace(" +
                        fmt_double(d.scale) + "): requires delta * scale < 1, got " +
                        fmt_double(delta * d.scale));
                }
                return 1.0 / (1.0 - delta * d.scale);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return gaussian_abs_exp_moment(0.0, d.sigma, delta);
            } else {
                NeumaierSum s;
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    s.add(std::exp(delta * std::abs(d.values[i])) * d.probs[i]);
                }
                return s.value();
            }
        },
        dist);
}

// E e^{lambda X}, exact per member; lambda may be negative.
inline double mgf(const DistributionSpec& dist, double lambda) {
    if (!std::isfinite(lambda)) {
        throw std::domain_error("mgf: lambda must be finite");
    }
    return std::visit(
        [lambda](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return std::cosh(lambda);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (lambda == 0.0) return 1.0;
                return (std::exp(lambda * d.b) - std::exp(lambda * d.a)) /
                       (lambda * (d.b - d.a));
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return 1.0 - d.p + d.p * std::exp(lambda);
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return std::exp(-lambda * d.p) *
                       (1.0 - d.p + d.p * std::exp(lambda));
            } else if constexpr (std::is_same_v<T, Laplace>) {
                const double u = lambda * d.scale;
                if (std::abs(u) >= 1.0) {
                    throw std::domain_error(
                        "mgf diverges for laplace: requires |lambda| * scale < 1");
                }
                return 1.0 / (1.0 - u * u);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return std::exp(0.5 * lambda * lambda * d.sigma * d.sigma);
            } else {
                NeumaierSum s;
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    s.add(std::exp(lambda * d.values[i]) * d.probs[i]);
                }
                return s.value();
            }
        },
        dist);
}

struct MomentProfile {
    double delta = 0.0;
    double mean = 0.0;
    double second_abs_moment = 0.0;
    double abs_exp_moment = 1.0;
    double k_constant = 0.0;
    double k_sung = 0.0;
};

inline MomentProfile moment_profile(const DistributionSpec& dist, double delta) {
    validate(dist);
    MomentProfile p;
    p.delta = delta;
    p.mean = mean(dist);
    p.second_abs_moment = second_abs_moment(dist);
    p.abs_exp_moment = abs_exp_moment(dist, delta);
    p.k_constant = std::sqrt(p.second_abs_moment) * p.abs_exp_moment;
    p.k_sung = 2.0 * p.k_constant;
    return p;
}

inline bool is_finite_support(const DistributionSpec& dist) {
    return std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            return std::is_same_v<T, Rademacher> || std::is_same_v<T, Bernoulli> ||
                   std::is_same_v<T, CenteredBernoulli> ||
                   std::is_same_v<T, DiscreteTable>;
        },
        dist);
}

// Finite support as a sorted table; throws for continuous members.
inline DiscreteTable support_table(const DistributionSpec& dist) {
    DiscreteTable t = std::visit(
        [](const auto& d) -> DiscreteTable {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return {{-1.0, 1.0}, {0.5, 0.5}};
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return {{0.0, 1.0}, {1.0 - d.p, d.p}};
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return {{-d.p, 1.0 - d.p}, {1.0 - d.p, d.p}};
            } else if constexpr (std::is_same_v<T, DiscreteTable>) {
                return d;
            } else {
                throw std::domain_error(
                    "support_table: distribution has continuous support");
            }
        },
        dist);
    std::vector<std::size_t> order(t.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return t.values[i] < t.values[j];
    });
    DiscreteTable sorted;
    sorted.values.reserve(order.size());
    sorted.probs.reserve(order.size());
    for (const std::size_t i : order) {
        sorted.values.push_back(t.values[i]);
        sorted.probs.push_back(t.probs[i]);
    }
    return sorted;
}

inline double sample(const DistributionSpec& dist, SplitRng& rng) {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                return (rng.next_u64() >> 63) ? 1.0 : -1.0;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return d.a + (d.b - d.a) * rng.next_unit();
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return rng.next_unit() < d.p ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                return (rng.next_unit() < d.p ? 1.0 : 0.0) - d.p;
            } else if constexpr (std::is_same_v<T, Laplace>) {
                const double u = rng.next_open() - 0.5;
                const double mag = -d.scale * std::log1p(-2.0 * std::abs(u));
                return u < 0.0 ? -mag : mag;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return d.sigma * rng.next_normal();
            } else {
                const double u = rng.next_unit();
                double cum = 0.0;
                for (std::size_t i = 0; i + 1 < d.values.size(); ++i) {
                    cum += d.probs[i];
                    if (u < cum) return d.values[i];
                }
                return d.values.back();
            }
        },
        dist);
}

inline std::vector<double> sample_iid(const DistributionSpec& dist,
                                      std::uint64_t n, std::uint64_t seed) {
    validate(dist);
    SplitRng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(sample(dist, rng));
    return out;
}

// Empirical counterpart of moment_profile, from a sample.
inline MomentProfile empirical_profile(const std::vector<double>& samples,
                                       double delta) {
    if (samples.empty()) {
        throw std::domain_error("empirical_profile: sample must be nonempty");
    }
    if (!(delta > 0.0)) {
        throw std::domain_error("empirical_profile: requires delta > 0");
    }
    NeumaierSum s1;
    NeumaierSum s2;
    NeumaierSum se;
    for (const double x : samples) {
        s1.add(x);
        s2.add(x * x);
        se.add(std::exp(delta * std::abs(x)));
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    MomentProfile p;
    p.delta = delta;
    p.mean = s1.value() * inv;
    p.second_abs_moment = s2.value() * inv;
    p.abs_exp_moment = se.value() * inv;
    p.k_constant = std::sqrt(p.second_abs_moment) * p.abs_exp_moment;
    p.k_sung = 2.0 * p.k_constant;
    return p;
}

} // namespace tailbound
