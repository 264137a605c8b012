// exact.hpp
//
// Enumeration-based ground truth for finite-support marginals: the exact
// law of an i.i.d. sum by iterated convolution, exact two-sided tails, and
// exact MGFs. Every statistical bound in the library is confronted with
// these values in the dominance suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "distributions.hpp"
#include "special.hpp"

namespace tailbound {

struct ExactPMF {
    std::vector<double> support;
    std::vector<double> probs;
};

inline constexpr std::uint64_t kEnumerationCap = 10'000'000;

// Convolution atoms whose values agree to this relative tolerance are the
// same atom reached along different accumulation orders; merging them keeps
// float-keyed convolution from splitting identical support points.
// Integer-valued supports accumulate exactly, so they merge exactly.
inline constexpr double kMergeTol = 1e-9;

namespace detail {

inline void sort_and_merge(std::vector<std::pair<double, double>>& atoms,
                           ExactPMF& out) {
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    out.support.clear();
    out.probs.clear();
    for (const auto& [v, p] : atoms) {
        if (!out.support.empty() &&
            std::abs(v - out.support.back()) <=
                kMergeTol * std::max(1.0, std::abs(out.support.back()))) {
            out.probs.back() += p;
        } else {
            out.support.push_back(v);
            out.probs.push_back(p);
        }
    }
}

} // namespace detail

inline ExactPMF convolve(const ExactPMF& a, const ExactPMF& b) {
    const std::uint64_t states =
        static_cast<std::uint64_t>(a.support.size()) *
        static_cast<std::uint64_t>(b.support.size());
    if (states > kEnumerationCap) {
        throw std::length_error("convolve: enumeration exceeds the 10^7 state cap");
    }
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(states);
    for (std::size_t i = 0; i < a.support.size(); ++i) {
        for (std::size_t j = 0; j < b.support.size(); ++j) {
            atoms.emplace_back(a.support[i] + b.support[j],
                               a.probs[i] * b.probs[j]);
        }
    }
    ExactPMF out;
    detail::sort_and_merge(atoms, out);
    return out;
}

// Exact law of S_n = X_1 + ... + X_n for i.i.d. finite-support X.
inline ExactPMF exact_sum_pmf(const DistributionSpec& dist, std::uint64_t n) {
    if (n == 0) {
        throw std::domain_error("exact_sum_pmf: n must be positive");
    }
    validate(dist);
    const DiscreteTable marginal = support_table(dist);
    if (n * static_cast<std::uint64_t>(marginal.values.size()) > kEnumerationCap) {
        throw std::length_error(
            "exact_sum_pmf: enumeration exceeds the 10^7 state cap");
    }
    ExactPMF step{marginal.values, marginal.probs};
    ExactPMF acc = step;
    for (std::uint64_t i = 1; i < n; ++i) {
        acc = convolve(acc, step);
    }
    return acc;
}

// P(|S - center| > threshold), exactly. threshold < 0 returns 1.
inline double exact_tail(const ExactPMF& pmf, double center, double threshold) {
    NeumaierSum mass;
    for (std::size_t i = 0; i < pmf.support.size(); ++i) {
        if (std::abs(pmf.support[i] - center) > threshold) {
            mass.add(pmf.probs[i]);
        }
    }
    return std::min(1.0, std::max(0.0, mass.value()));
}

inline double pmf_mean(const ExactPMF& pmf) {
    NeumaierSum s;
    for (std::size_t i = 0; i < pmf.support.size(); ++i) {
        s.add(pmf.support[i] * pmf.probs[i]);
    }
    return s.value();
}

inline double pmf_variance(const ExactPMF& pmf) {
    const double mu = pmf_mean(pmf);
    NeumaierSum s;
    for (std::size_t i = 0; i < pmf.support.size(); ++i) {
        const double d = pmf.support[i] - mu;
        s.add(d * d * pmf.probs[i]);
    }
    return s.value();
}

// E e^{lambda (X - centered * EX)} by finite summation.
inline double exact_mgf(const DistributionSpec& dist, double lambda,
                        bool centered) {
    validate(dist);
    const DiscreteTable t = support_table(dist);
    const double shift = centered ? mean(dist) : 0.0;
    NeumaierSum s;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        s.add(std::exp(lambda * (t.values[i] - shift)) * t.probs[i]);
    }
    return s.value();
}

} // namespace tailbound
