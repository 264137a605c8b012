// presets.hpp
//
// Default catalog and default suite definitions shared by the CLI
// subcommands, the reference config, and the acceptance suite. Epsilon
// grids for the tail suites start at the marginal K and extend far enough
// that at least some rows are non-vacuous.

#pragma once

#include <cstdint>
#include <vector>

#include "config.hpp"
#include "families.hpp"
#include "mc_verify.hpp"

namespace tailbound {

inline std::vector<KTableEntry> default_catalog() {
    return {
        {Rademacher{}, 1.0},
        {Uniform{-1.0, 1.0}, 1.0},
        {Bernoulli{0.5}, 1.0},
        {CenteredBernoulli{0.3}, 1.0},
        {Laplace{1.0}, 0.5},
        {Gaussian{1.0}, 1.0},
        {DiscreteTable{{-1.0, 0.0, 2.0}, {0.25, 0.5, 0.25}}, 0.5},
    };
}

inline ScalarSuite default_scalar_suite() {
    return ScalarSuite{};
}

inline KTableSuite default_k_table_suite() {
    return KTableSuite{default_catalog()};
}

// One lemma suite per catalog member, lambda in {delta/8, delta/4, delta/2}.
inline std::vector<LemmaSuite> default_lemma_suites(std::uint64_t reps) {
    std::vector<LemmaSuite> out;
    for (const KTableEntry& e : default_catalog()) {
        LemmaSuite s;
        s.dist = e.dist;
        s.delta = e.delta;
        s.lambda_grid = {e.delta / 8.0, e.delta / 4.0, e.delta / 2.0};
        s.reps = reps;
        out.push_back(std::move(s));
    }
    return out;
}

// Acceptability defaults. Negatively associated constructions probe the
// whole [-delta, delta] range; i.i.d. families stay within [-delta/2,
// delta/2], where the MGF estimator always has finite variance.
inline std::vector<AcceptabilitySuite> default_acceptability_suites(
    std::uint64_t reps) {
    std::vector<AcceptabilitySuite> out;

    auto iid_grid = [](double delta) {
        return std::vector<double>{-delta / 2.0, -delta / 4.0, delta / 4.0,
                                   delta / 2.0};
    };
    auto na_grid = [](double delta) {
        return std::vector<double>{-delta, -delta / 2.0, delta / 2.0, delta};
    };

    out.push_back({FamilySpec{IidFamily{Rademacher{}, 4}, 1.0, 1.0},
                   iid_grid(1.0), reps});
    out.push_back({FamilySpec{IidFamily{Gaussian{1.0}, 3}, 1.0, 1.0},
                   iid_grid(1.0), reps});
    out.push_back({FamilySpec{MultinomialCoords{1, {0.5, 0.5}, 2}, 1.0, 1.0},
                   {1.0, -1.0, 0.5}, reps});
    out.push_back({FamilySpec{RandomPermutation{{0.0, 1.0}}, 1.0, 1.0},
                   {1.0, -1.0, 0.5}, reps});
    out.push_back(
        {FamilySpec{MultinomialCoords{5, {0.3, 0.3, 0.4}, 2}, 1.0, 1.0},
         na_grid(1.0), reps});
    out.push_back(
        {FamilySpec{SrsWithoutReplacement{{-1.0, -0.5, 0.5, 1.0, 2.0}, 3}, 1.0,
                    0.5},
         na_grid(0.5), reps});
    out.push_back({FamilySpec{RandomPermutation{{-1.0, 0.0, 1.0, 2.0}}, 1.0, 0.5},
                   na_grid(0.5), reps});
    out.push_back(
        {FamilySpec{NegCorrGaussian{{0.0, 0.0, 0.0},
                                    {{1.0, -0.3, -0.2},
                                     {-0.3, 1.0, -0.4},
                                     {-0.2, -0.4, 1.0}}},
                    1.0, 0.5},
         na_grid(0.5), reps});
    return out;
}

namespace detail {

inline std::vector<double> eps_grid_from_k(double k,
                                           std::initializer_list<double> offsets) {
    std::vector<double> out;
    for (const double o : offsets) out.push_back(k + o);
    return out;
}

} // namespace detail

inline std::vector<Theorem1Suite> default_theorem1_suites(std::uint64_t reps) {
    std::vector<Theorem1Suite> out;

    {
        Theorem1Suite s;
        s.family = FamilySpec{IidFamily{Rademacher{}, 50}, 1.0, 0.2};
        s.delta = 0.2;
        const double k = marginal_profile(s.family, 0, s.delta).k_constant;
        s.epsilon_grid = detail::eps_grid_from_k(k, {0.0, 0.25, 0.5, 1.0});
        s.reps = reps;
        out.push_back(std::move(s));
    }
    {
        Theorem1Suite s;
        s.family =
            FamilySpec{MultinomialCoords{30, {0.25, 0.25, 0.25, 0.25}, 2}, 1.0,
                       0.1};
        s.delta = 0.1;
        const double k = marginal_profile(s.family, 0, s.delta).k_constant;
        s.epsilon_grid = detail::eps_grid_from_k(k, {0.0, 5.0, 10.0, 20.0});
        s.reps = reps;
        out.push_back(std::move(s));
    }
    {
        Theorem1Suite s;
        s.family = FamilySpec{IidFamily{Gaussian{1.0}, 20}, 1.0, 0.5};
        s.delta = 0.5;
        const double k = marginal_profile(s.family, 0, s.delta).k_constant;
        s.epsilon_grid = detail::eps_grid_from_k(k, {0.0, 0.5, 1.0});
        s.reps = reps;
        out.push_back(std::move(s));
    }
    {
        Theorem1Suite s;
        s.family = FamilySpec{IidFamily{Laplace{1.0}, 20}, 1.0, 0.25};
        s.delta = 0.25;
        const double k = marginal_profile(s.family, 0, s.delta).k_constant;
        s.epsilon_grid = detail::eps_grid_from_k(k, {0.0, 0.5, 1.0});
        s.reps = reps;
        out.push_back(std::move(s));
    }
    {
        Theorem1Suite s;
        s.family =
            FamilySpec{SrsWithoutReplacement{{0.0, 1.0, 1.0, 2.0, 3.0}, 2}, 1.0,
                       0.2};
        s.delta = 0.2;
        const double k = marginal_profile(s.family, 0, s.delta).k_constant;
        s.epsilon_grid = detail::eps_grid_from_k(k, {0.0, 6.0, 12.0, 18.0});
        s.reps = reps;
        out.push_back(std::move(s));
    }
    {
        Theorem1Suite s;
        s.family =
            FamilySpec{RandomPermutation{{-2.0, -1.0, 0.0, 1.0, 2.0}}, 1.0, 0.2};
        s.delta = 0.2;
        const double k = marginal_profile(s.family, 0, s.delta).k_constant;
        s.epsilon_grid = detail::eps_grid_from_k(k, {0.0, 1.0, 2.0, 3.0});
        s.reps = reps;
        out.push_back(std::move(s));
    }
    {
        Theorem1Suite s;
        s.family = FamilySpec{
            NegCorrGaussian{{0.0, 0.0}, {{1.0, -0.5}, {-0.5, 1.0}}}, 1.0, 0.5};
        s.delta = 0.5;
        const double k = marginal_profile(s.family, 0, s.delta).k_constant;
        s.epsilon_grid = detail::eps_grid_from_k(k, {0.0, 1.5, 3.0});
        s.reps = reps;
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<CompareSuite> default_compare_suites() {
    return {
        {Rademacher{}, 1.0, {10, 100, 1000}, 1.0, 1.0},
        {Uniform{-1.0, 1.0}, 1.0, {10, 100, 1000}, 0.5, 1.0},
        {Laplace{1.0}, 0.5, {100, 10000}, 1.0, 1.0},
    };
}

inline EndCheckSuite default_end_suite() {
    EndCheckSuite s;
    const DiscreteTable bern{{0.0, 1.0}, {0.5, 0.5}};
    const DiscreteTable table{{-1.0, 0.0, 2.0}, {0.25, 0.5, 0.25}};
    const DiscreteTable bern3{{0.0, 1.0}, {0.7, 0.3}};
    s.cases.push_back({"product_bernoulli", product_table(bern, bern)});
    s.cases.push_back({"product_mixed", product_table(table, bern3)});
    s.cases.push_back(
        {"comonotone_bernoulli",
         BivariateTable{{0.0, 1.0}, {0.0, 1.0}, {{0.5, 0.0}, {0.0, 0.5}}}});
    s.cases.push_back(
        {"countermonotone_bernoulli",
         BivariateTable{{0.0, 1.0}, {0.0, 1.0}, {{0.0, 0.5}, {0.5, 0.0}}}});
    return s;
}

// Full default experiment, as run by the CLI verify/table subcommands.
inline ExperimentConfig default_config(std::uint64_t seed,
                                       std::uint64_t lemma_reps = 1'000'000,
                                       std::uint64_t accept_reps = 200'000,
                                       std::uint64_t tail_reps = 100'000) {
    ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.suites.push_back(default_scalar_suite());
    cfg.suites.push_back(default_k_table_suite());
    for (auto& s : default_lemma_suites(lemma_reps)) cfg.suites.push_back(s);
    for (auto& s : default_acceptability_suites(accept_reps)) {
        cfg.suites.push_back(s);
    }
    for (auto& s : default_theorem1_suites(tail_reps)) cfg.suites.push_back(s);
    for (auto& s : default_compare_suites()) cfg.suites.push_back(s);
    cfg.suites.push_back(default_end_suite());
    return cfg;
}

// The shipped reference configuration: small rep counts, every suite kind,
// both output formats, quick enough to run repeatedly in reproducibility
// checks while still exercising the Monte Carlo reduction paths.
inline ExperimentConfig reference_config() {
    ExperimentConfig cfg;
    cfg.seed = 20260817;
    cfg.format = OutputFormat::Both;

    ScalarSuite scalar;
    scalar.lo = -30.0;
    scalar.hi = 30.0;
    scalar.step = 0.01;
    scalar.random_points = 20'000;
    cfg.suites.push_back(scalar);

    cfg.suites.push_back(default_k_table_suite());

    for (const KTableEntry& e :
         {KTableEntry{Rademacher{}, 1.0}, KTableEntry{Uniform{-1.0, 1.0}, 1.0},
          KTableEntry{Laplace{1.0}, 0.5}}) {
        LemmaSuite s;
        s.dist = e.dist;
        s.delta = e.delta;
        s.lambda_grid = {e.delta / 8.0, e.delta / 4.0, e.delta / 2.0};
        s.reps = 50'000;
        cfg.suites.push_back(std::move(s));
    }

    {
        AcceptabilitySuite s;
        s.family = FamilySpec{IidFamily{Rademacher{}, 4}, 1.0, 1.0};
        s.lambda_grid = {-0.5, 0.25, 0.5};
        s.reps = 20'000;
        cfg.suites.push_back(std::move(s));
    }
    {
        AcceptabilitySuite s;
        s.family = FamilySpec{MultinomialCoords{1, {0.5, 0.5}, 2}, 1.0, 1.0};
        s.lambda_grid = {1.0, -1.0};
        s.reps = 20'000;
        cfg.suites.push_back(std::move(s));
    }
    {
        AcceptabilitySuite s;
        s.family = FamilySpec{RandomPermutation{{0.0, 1.0}}, 1.0, 1.0};
        s.lambda_grid = {1.0, -1.0};
        s.reps = 20'000;
        cfg.suites.push_back(std::move(s));
    }

    {
        Theorem1Suite s;
        s.family = FamilySpec{IidFamily{Rademacher{}, 50}, 1.0, 0.2};
        s.delta = 0.2;
        s.epsilon_grid = {1.23, 1.5, 2.25};
        s.reps = 20'000;
        cfg.suites.push_back(std::move(s));
    }
    {
        Theorem1Suite s;
        s.family = FamilySpec{IidFamily{Gaussian{1.0}, 5}, 1.0, 0.5};
        s.delta = 0.5;
        s.epsilon_grid = {1.6, 2.6};
        s.reps = 20'000;
        cfg.suites.push_back(std::move(s));
    }

    {
        CompareSuite s;
        s.dist = Rademacher{};
        s.delta = 1.0;
        s.n_grid = {10, 100, 1000};
        s.alpha = 1.0;
        s.m = 1.0;
        cfg.suites.push_back(std::move(s));
    }

    cfg.suites.push_back(default_end_suite());
    return cfg;
}

} // namespace tailbound
