// families.hpp
//
// Joint families with known dependence structure. The negatively
// associated constructions (multinomial coordinates, simple random
// sampling without replacement, random permutations, jointly Gaussian
// coordinates with non-positive correlations) carry declared_m = 1; i.i.d.
// families are acceptable with equality. acceptability_ratio estimates
// E e^{lambda sum X_i} / prod_i E e^{lambda X_i} against that declaration,
// and end_min_M computes the exact minimal orthant constant of a finite
// bivariate table.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "distributions.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace tailbound {

struct IidFamily {
    DistributionSpec dist;
    std::uint64_t n = 1;
    bool operator==(const IidFamily&) const = default;
};

// First `take` coordinate counts of a Multinomial(trials, probs) vector.
struct MultinomialCoords {
    std::uint64_t trials = 1;
    std::vector<double> probs;
    std::uint64_t take = 1;
    bool operator==(const MultinomialCoords&) const = default;
};

// `draws` values sampled without replacement from a finite population.
struct SrsWithoutReplacement {
    std::vector<double> population;
    std::uint64_t draws = 1;
    bool operator==(const SrsWithoutReplacement&) const = default;
};

// The given values in uniformly random order.
struct RandomPermutation {
    std::vector<double> values;
    bool operator==(const RandomPermutation&) const = default;
};

// Jointly Gaussian with all off-diagonal covariances <= 0.
struct NegCorrGaussian {
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;
    bool operator==(const NegCorrGaussian&) const = default;
};

using FamilyKind = std::variant<IidFamily, MultinomialCoords,
                                SrsWithoutReplacement, RandomPermutation,
                                NegCorrGaussian>;

struct FamilySpec {
    FamilyKind kind;
    double declared_m = 1.0;
    double declared_delta = 1.0;
    bool operator==(const FamilySpec&) const = default;
};

// Lower-triangular Cholesky factor with diagonal pivoting; tolerates
// positive semidefinite inputs by truncating at the numerical rank.
struct CholeskyFactor {
    std::vector<std::vector<double>> L;
    std::vector<std::size_t> perm;
    std::size_t rank = 0;
};

inline CholeskyFactor pivoted_cholesky(const std::vector<std::vector<double>>& a) {
    const std::size_t n = a.size();
    for (const auto& row : a) {
        if (row.size() != n) {
            throw std::invalid_argument("cholesky: matrix must be square");
        }
    }
    std::vector<std::vector<double>> work = a;
    CholeskyFactor f;
    f.L.assign(n, std::vector<double>(n, 0.0));
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::abs(work[i][i]));
    }
    const double tol = std::max(1e-12, 1e-12 * max_diag);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (work[f.perm[i]][f.perm[i]] > work[f.perm[pivot]][f.perm[pivot]]) {
                pivot = i;
            }
        }
        std::swap(f.perm[k], f.perm[pivot]);
        for (std::size_t i = 0; i < n; ++i) {
            std::swap(f.L[k][i], f.L[pivot][i]);
        }
        // Subtlety: rows of L are swapped along with perm so that row k of
        // L always describes the coordinate perm[k].
        double d = work[f.perm[k]][f.perm[k]];
        for (std::size_t j = 0; j < k; ++j) {
            d -= f.L[k][j] * f.L[k][j];
        }
        if (d <= tol) {
            if (d < -tol) {
                throw std::invalid_argument(
                    "neg_corr_gaussian: covariance is not positive semidefinite");
            }
            break;
        }
        f.rank = k + 1;
        f.L[k][k] = std::sqrt(d);
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = work[f.perm[i]][f.perm[k]];
            for (std::size_t j = 0; j < k; ++j) {
                s -= f.L[i][j] * f.L[k][j];
            }
            f.L[i][k] = s / f.L[k][k];
        }
    }

    // Residual diagnostic: a genuinely indefinite matrix shows up as a
    // remaining diagonal block with a significantly negative entry.
    for (std::size_t i = f.rank; i < n; ++i) {
        double resid = work[f.perm[i]][f.perm[i]];
        for (std::size_t j = 0; j < f.rank; ++j) {
            resid -= f.L[i][j] * f.L[i][j];
        }
        if (resid < -1e-8 * std::max(1.0, max_diag)) {
            throw std::invalid_argument(
                "neg_corr_gaussian: covariance is not positive semidefinite");
        }
    }
    return f;
}

inline void validate_family(const FamilySpec& spec) {
    if (!(spec.declared_m >= 1.0)) {
        throw std::invalid_argument(
            "family: declared_m must be at least 1 (acceptability at "
            "lambda = 0 forces M >= 1)");
    }
    if (!(spec.declared_delta > 0.0) || !std::isfinite(spec.declared_delta)) {
        throw std::invalid_argument("family: declared_delta must be positive");
    }
    std::visit(
        [](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, IidFamily>) {
                validate(k.dist);
                if (k.n < 1) {
                    throw std::invalid_argument("iid family: n must be at least 1");
                }
            } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                if (k.trials < 1) {
                    throw std::invalid_argument(
                        "multinomial_coords: trials must be at least 1");
                }
                if (k.probs.size() < 2) {
                    throw std::invalid_argument(
                        "multinomial_coords: needs at least 2 cells");
                }
                if (k.take < 1 || k.take > k.probs.size()) {
                    throw std::invalid_argument(
                        "multinomial_coords: take must lie in [1, len(probs)]");
                }
                NeumaierSum total;
                for (const double p : k.probs) {
                    if (!(p > 0.0)) {
                        throw std::invalid_argument(
                            "multinomial_coords: cell probs must be positive");
                    }
                    total.add(p);
                }
                if (std::abs(total.value() - 1.0) > kProbSumTol) {
                    throw std::invalid_argument(
                        "multinomial_coords: probs must sum to 1 within 1e-12");
                }
            } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                if (k.population.empty()) {
                    throw std::invalid_argument(
                        "srs_without_replacement: population must be nonempty");
                }
                if (k.draws < 1 || k.draws > k.population.size()) {
                    throw std::invalid_argument(
                        "srs_without_replacement: draws must lie in "
                        "[1, population size]");
                }
                for (const double v : k.population) {
                    if (!std::isfinite(v)) {
                        throw std::invalid_argument(
                            "srs_without_replacement: population values must be "
                            "finite");
                    }
                }
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                if (k.values.empty()) {
                    throw std::invalid_argument(
                        "random_permutation: values must be nonempty");
                }
                for (const double v : k.values) {
                    if (!std::isfinite(v)) {
                        throw std::invalid_argument(
                            "random_permutation: values must be finite");
                    }
                }
            } else if constexpr (std::is_same_v<T, NegCorrGaussian>) {
                const std::size_t n = k.mean.size();
                if (n == 0 || k.cov.size() != n) {
                    throw std::invalid_argument(
                        "neg_corr_gaussian: mean and cov dimensions must match");
                }
                for (std::size_t i = 0; i < n; ++i) {
                    if (k.cov[i].size() != n) {
                        throw std::invalid_argument(
                            "neg_corr_gaussian: cov must be square");
                    }
                    if (!(k.cov[i][i] >= 0.0)) {
                        throw std::invalid_argument(
                            "neg_corr_gaussian: variances must be nonnegative");
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        if (std::abs(k.cov[i][j] - k.cov[j][i]) > 1e-12) {
                            throw std::invalid_argument(
                                "neg_corr_gaussian: cov must be symmetric");
                        }
                        if (i != j && k.cov[i][j] > 0.0) {
                            throw std::invalid_argument(
                                "neg_corr_gaussian: off-diagonal covariances "
                                "must be <= 0");
                        }
                    }
                }
                pivoted_cholesky(k.cov);
            }
        },
        spec.kind);
}

inline std::uint64_t family_size(const FamilySpec& spec) {
    return std::visit(
        [](const auto& k) -> std::uint64_t {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, IidFamily>) {
                return k.n;
            } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                return k.take;
            } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                return k.draws;
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                return k.values.size();
            } else {
                return k.mean.size();
            }
        },
        spec.kind);
}

inline std::string family_name(const FamilySpec& spec) {
    return std::visit(
        [&](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, IidFamily>) {
                return "iid(" + name(k.dist) + ";n=" + fmt_u64(k.n) + ")";
            } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                return "multinomial_coords(t=" + fmt_u64(k.trials) +
                       ";cells=" + fmt_u64(k.probs.size()) +
                       ";take=" + fmt_u64(k.take) + ")";
            } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                return "srs_without_replacement(N=" + fmt_u64(k.population.size()) +
                       ";draws=" + fmt_u64(k.draws) + ")";
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                return "random_permutation(n=" + fmt_u64(k.values.size()) + ")";
            } else {
                return "neg_corr_gaussian(n=" + fmt_u64(k.mean.size()) + ")";
            }
        },
        spec.kind);
}

// Deduplicated uniform law over a value multiset (SRS and permutation
// marginals are exchangeable, hence uniform over the population).
inline DiscreteTable uniform_table(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    DiscreteTable t;
    const double w = 1.0 / static_cast<double>(sorted.size());
    for (const double v : sorted) {
        if (!t.values.empty() && t.values.back() == v) {
            t.probs.back() += w;
        } else {
            t.values.push_back(v);
            t.probs.push_back(w);
        }
    }
    return t;
}

// Marginal law of coordinate i where it is a catalog member; the
// multinomial marginal Binomial(t, p_i) and general-mean Gaussian marginals
// are handled by the moment functions below instead.
inline double marginal_mean(const FamilySpec& spec, std::size_t i) {
    const std::uint64_t n = family_size(spec);
    if (i >= n) {
        throw std::out_of_range("marginal_mean: coordinate index out of range");
    }
    return std::visit(
        [i](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, IidFamily>) {
                return mean(k.dist);
            } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                return static_cast<double>(k.trials) * k.probs[i];
            } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                return mean(DistributionSpec{uniform_table(k.population)});
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                return mean(DistributionSpec{uniform_table(k.values)});
            } else {
                return k.mean[i];
            }
        },
        spec.kind);
}

namespace detail {

// Binomial(t, p) moments: E X^2 = t p (1-p) + (t p)^2 and, since X >= 0,
// E e^{delta |X|} = (1 - p + p e^{delta})^t.
inline MomentProfile binomial_profile(std::uint64_t t, double p, double delta) {
    const double tp = static_cast<double>(t) * p;
    MomentProfile prof;
    prof.delta = delta;
    prof.mean = tp;
    prof.second_abs_moment = tp * (1.0 - p) + tp * tp;
    prof.abs_exp_moment =
        std::pow(1.0 - p + p * std::exp(delta), static_cast<double>(t));
    prof.k_constant = std::sqrt(prof.second_abs_moment) * prof.abs_exp_moment;
    prof.k_sung = 2.0 * prof.k_constant;
    return prof;
}

inline MomentProfile gaussian_profile(double mu, double sigma2, double delta) {
    const double sigma = std::sqrt(sigma2);
    MomentProfile prof;
    prof.delta = delta;
    prof.mean = mu;
    prof.second_abs_moment = mu * mu + sigma2;
    prof.abs_exp_moment = gaussian_abs_exp_moment(mu, sigma, delta);
    prof.k_constant = std::sqrt(prof.second_abs_moment) * prof.abs_exp_moment;
    prof.k_sung = 2.0 * prof.k_constant;
    return prof;
}

} // namespace detail

inline MomentProfile marginal_profile(const FamilySpec& spec, std::size_t i,
                                      double delta) {
    if (i >= family_size(spec)) {
        throw std::out_of_range(
            "marginal_profile: coordinate index out of range");
    }
    if (!(delta > 0.0)) {
        throw std::domain_error("marginal_profile: requires delta > 0");
    }
    return std::visit(
        [i, delta](const auto& k) -> MomentProfile {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, IidFamily>) {
                return moment_profile(k.dist, delta);
            } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                return detail::binomial_profile(k.trials, k.probs[i], delta);
            } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                return moment_profile(
                    DistributionSpec{uniform_table(k.population)}, delta);
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                return moment_profile(DistributionSpec{uniform_table(k.values)},
                                      delta);
            } else {
                return detail::gaussian_profile(k.mean[i], k.cov[i][i], delta);
            }
        },
        spec.kind);
}

// E e^{lambda X_i}, analytic per marginal; the acceptability denominator.
inline double marginal_mgf(const FamilySpec& spec, std::size_t i, double lambda) {
    if (i >= family_size(spec)) {
        throw std::out_of_range("marginal_mgf: coordinate index out of range");
    }
    return std::visit(
        [i, lambda](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, IidFamily>) {
                return mgf(k.dist, lambda);
            } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                return std::pow(1.0 - k.probs[i] + k.probs[i] * std::exp(lambda),
                                static_cast<double>(k.trials));
            } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                return mgf(DistributionSpec{uniform_table(k.population)}, lambda);
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                return mgf(DistributionSpec{uniform_table(k.values)}, lambda);
            } else {
                const double s2 = k.cov[i][i];
                return std::exp(lambda * k.mean[i] +
                                0.5 * lambda * lambda * s2);
            }
        },
        spec.kind);
}

// Precomputed joint sampler; one draw fills a vector of family_size values.
class FamilySampler {
  public:
    explicit FamilySampler(const FamilySpec& spec) : spec_(spec) {
        validate_family(spec);
        if (const auto* g = std::get_if<NegCorrGaussian>(&spec.kind)) {
            chol_ = pivoted_cholesky(g->cov);
        }
    }

    std::uint64_t size() const { return family_size(spec_); }

    // Mutates internal scratch space; give each worker thread its own copy.
    void draw(SplitRng& rng, std::vector<double>& out) {
        out.assign(size(), 0.0);
        std::visit(
            [&](const auto& k) {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, IidFamily>) {
                    for (std::uint64_t i = 0; i < k.n; ++i) {
                        out[i] = sample(k.dist, rng);
                    }
                } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                    // One cell per trial by CDF inversion; counts of the
                    // first `take` cells are reported.
                    for (std::uint64_t trial = 0; trial < k.trials; ++trial) {
                        const double u = rng.next_unit();
                        double cum = 0.0;
                        std::size_t cell = k.probs.size() - 1;
                        for (std::size_t c = 0; c + 1 < k.probs.size(); ++c) {
                            cum += k.probs[c];
                            if (u < cum) {
                                cell = c;
                                break;
                            }
                        }
                        if (cell < k.take) out[cell] += 1.0;
                    }
                } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                    // Partial Fisher-Yates over a scratch copy: the first
                    // `draws` positions are an SRS of the population.
                    scratch_ = k.population;
                    for (std::uint64_t i = 0; i < k.draws; ++i) {
                        const std::uint64_t j =
                            i + rng.next_below(scratch_.size() - i);
                        std::swap(scratch_[i], scratch_[j]);
                        out[i] = scratch_[i];
                    }
                } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                    scratch_ = k.values;
                    for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
                        const std::uint64_t j =
                            i + rng.next_below(scratch_.size() - i);
                        std::swap(scratch_[i], scratch_[j]);
                    }
                    out = scratch_;
                } else {
                    normals_.resize(chol_.rank);
                    for (std::size_t j = 0; j < chol_.rank; ++j) {
                        normals_[j] = rng.next_normal();
                    }
                    for (std::size_t r = 0; r < out.size(); ++r) {
                        double acc = k.mean[chol_.perm[r]];
                        for (std::size_t j = 0; j < chol_.rank; ++j) {
                            acc += chol_.L[r][j] * normals_[j];
                        }
                        out[chol_.perm[r]] = acc;
                    }
                }
            },
            spec_.kind);
    }

  private:
    FamilySpec spec_;
    CholeskyFactor chol_;
    std::vector<double> scratch_;
    std::vector<double> normals_;
};

inline std::vector<double> sample_family(const FamilySpec& spec,
                                         std::uint64_t seed) {
    FamilySampler sampler(spec);
    SplitRng rng(seed);
    std::vector<double> out;
    sampler.draw(rng, out);
    return out;
}

struct RatioEstimate {
    double ratio = 0.0;
    double se = 0.0;
    double denominator = 1.0;
};

// Estimates E e^{lambda sum X_i} / prod_i E e^{lambda X_i}: numerator by
// Monte Carlo, denominator analytic. The replication stream id equals the
// replication index, so shard assignment cannot change any draw.
inline RatioEstimate acceptability_ratio(const FamilySpec& spec, double lambda,
                                         std::uint64_t reps, std::uint64_t seed,
                                         unsigned workers = 1) {
    validate_family(spec);
    if (reps < 1000) {
        throw std::domain_error("acceptability_ratio: reps must be at least 10^3");
    }
    if (std::abs(lambda) > spec.declared_delta) {
        throw std::domain_error(
            "acceptability_ratio: lambda must lie in [-delta, delta]");
    }

    const FamilySampler sampler(spec);
    const std::uint64_t n = sampler.size();
    double denom = 1.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        denom *= marginal_mgf(spec, i, lambda);
    }

    struct Partial {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    const auto partials = run_blocks<Partial>(
        reps, workers, [&](std::uint64_t, BlockRange range) {
            FamilySampler local = sampler;
            Partial p;
            NeumaierSum s;
            NeumaierSum s2;
            std::vector<double> x;
            for (std::uint64_t r = range.begin; r < range.end; ++r) {
                SplitRng rng(seed, r);
                local.draw(rng, x);
                NeumaierSum coord;
                for (const double v : x) coord.add(v);
                const double w = std::exp(lambda * coord.value());
                s.add(w);
                s2.add(w * w);
            }
            p.sum = s.value();
            p.sum_sq = s2.value();
            return p;
        });

    NeumaierSum total;
    NeumaierSum total_sq;
    for (const Partial& p : partials) {
        total.add(p.sum);
        total_sq.add(p.sum_sq);
    }
    const double m = total.value() / static_cast<double>(reps);
    const double var =
        std::max(0.0, total_sq.value() / static_cast<double>(reps) - m * m);
    RatioEstimate out;
    out.denominator = denom;
    out.ratio = m / denom;
    out.se = std::sqrt(var / static_cast<double>(reps)) / denom;
    return out;
}

struct BivariateTable {
    std::vector<double> support_x;
    std::vector<double> support_y;
    std::vector<std::vector<double>> joint_probs;
    bool operator==(const BivariateTable&) const = default;
};

inline void validate_table(const BivariateTable& t) {
    if (t.support_x.empty() || t.support_y.empty() ||
        t.joint_probs.size() != t.support_x.size()) {
        throw std::invalid_argument("bivariate table: dimensions must match");
    }
    NeumaierSum total;
    for (const auto& row : t.joint_probs) {
        if (row.size() != t.support_y.size()) {
            throw std::invalid_argument("bivariate table: dimensions must match");
        }
        for (const double p : row) {
            if (!(p >= 0.0)) {
                throw std::invalid_argument(
                    "bivariate table: probs must be nonnegative");
            }
            total.add(p);
        }
    }
    if (std::abs(total.value() - 1.0) > kProbSumTol) {
        throw std::invalid_argument(
            "bivariate table: probs must sum to 1 within 1e-12");
    }
}

// Exact minimal END constant: the largest ratio of a joint orthant
// probability to the product of its marginals, over both orthant kinds and
// all threshold pairs in the support grid. Zero-denominator pairs are
// vacuous and skipped.
inline double end_min_M(const BivariateTable& t) {
    validate_table(t);
    const std::size_t nx = t.support_x.size();
    const std::size_t ny = t.support_y.size();

    double best = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double x = t.support_x[i];
            const double y = t.support_y[j];
            long double joint_low = 0.0l;
            long double joint_up = 0.0l;
            long double px_low = 0.0l;
            long double py_low = 0.0l;
            for (std::size_t a = 0; a < nx; ++a) {
                for (std::size_t b = 0; b < ny; ++b) {
                    const long double p = t.joint_probs[a][b];
                    const bool xle = t.support_x[a] <= x;
                    const bool yle = t.support_y[b] <= y;
                    if (xle && yle) joint_low += p;
                    if (!xle && !yle) joint_up += p;
                    if (xle) px_low += p;
                    if (yle) py_low += p;
                }
            }
            const long double px_up = 1.0l - px_low;
            const long double py_up = 1.0l - py_low;
            if (px_low > 0.0l && py_low > 0.0l) {
                best = std::max(
                    best, static_cast<double>(joint_low / (px_low * py_low)));
            }
            if (px_up > 0.0l && py_up > 0.0l) {
                best = std::max(
                    best, static_cast<double>(joint_up / (px_up * py_up)));
            }
        }
    }
    return best;
}

// Independent product table from two marginal tables, for END fixtures.
inline BivariateTable product_table(const DiscreteTable& x,
                                    const DiscreteTable& y) {
    BivariateTable t;
    t.support_x = x.values;
    t.support_y = y.values;
    t.joint_probs.assign(x.values.size(),
                         std::vector<double>(y.values.size(), 0.0));
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        for (std::size_t j = 0; j < y.values.size(); ++j) {
            t.joint_probs[i][j] = x.probs[i] * y.probs[j];
        }
    }
    return t;
}

} // namespace tailbound
