#include <catch2/catch_amalgamated.hpp>

#include <tailbound/distributions.hpp>
#include <tailbound/tail_bounds.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace tailbound;

namespace {
const double kE = std::exp(1.0);
const double kLn2 = 0.6931471805599453;
}

TEST_CASE("single-variable mgf bound matches hand values", "[bounds]") {
    REQUIRE_THAT(lemma_log_bound(kE, 0.5, 1.0), WithinRel(0.5 * kE, 1e-14));
    REQUIRE_THAT(lemma_log_bound(2.0 * std::sqrt(2.0), 0.25, 0.5),
                 WithinRel(std::sqrt(2.0) / 2.0, 1e-14));
    REQUIRE_THAT(lemma_log_bound(kE, 0.5, 1.0, LemmaForm::ProofTight),
                 WithinRel(0.25 * kE, 1e-14));
}

TEST_CASE("single-variable mgf bound rejects out-of-range lambda", "[bounds]") {
    REQUIRE_THROWS_AS(lemma_log_bound(1.0, 0.6, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(lemma_log_bound(1.0, 0.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(lemma_log_bound(1.0, -0.1, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(lemma_log_bound(0.0, 0.25, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(lemma_log_bound(1.0, 0.25, 0.0), std::domain_error);
    REQUIRE_NOTHROW(lemma_log_bound(1.0, 0.5, 1.0));
}

TEST_CASE("sum tail bound matches the worked fixture", "[bounds]") {
    TailBoundQuery q{10, kE + 0.2, 1.0, 1.0, kE};
    BoundResult r = theorem1_log_bound(q);
    // log 2 - (10 * 1 / 2) * 0.2 = log 2 - 1.
    REQUIRE_THAT(r.log_bound, WithinRel(-0.3068528194400547, 1e-13));
    REQUIRE_THAT(r.bound_clipped, WithinRel(0.7357588823428847, 1e-13));
    REQUIRE(r.lambda_star == 0.5);
}

TEST_CASE("sum tail bound clips to one at the threshold edge", "[bounds]") {
    TailBoundQuery q{10, kE, 1.0, 1.0, kE};
    BoundResult r = theorem1_log_bound(q);
    REQUIRE_THAT(r.log_bound, WithinRel(kLn2, 1e-14));
    REQUIRE(r.bound_clipped == 1.0);
}

TEST_CASE("sum tail bound underflows cleanly for huge n", "[bounds]") {
    TailBoundQuery q{1000000, 2.0, 1.0, 1.0, 1.0};
    BoundResult r = theorem1_log_bound(q);
    REQUIRE(r.log_bound == kLn2 - 500000.0);
    REQUIRE(r.bound_clipped == 0.0);
}

TEST_CASE("sum tail bound validates its query", "[bounds]") {
    REQUIRE_THROWS_MATCHES(theorem1_log_bound({10, 0.5, 1.0, 1.0, 1.0}),
                           std::domain_error, Catch::Matchers::MessageMatches(ContainsSubstring("epsilon")));
    REQUIRE_THROWS_AS(theorem1_log_bound({0, 2.0, 1.0, 1.0, 1.0}), std::domain_error);
    REQUIRE_THROWS_AS(theorem1_log_bound({10, 2.0, 0.0, 1.0, 1.0}), std::domain_error);
    REQUIRE_THROWS_AS(theorem1_log_bound({10, 2.0, 1.0, 0.5, 1.0}), std::domain_error);
    REQUIRE_THROWS_AS(theorem1_log_bound({10, 2.0, 1.0, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("sum tail bound is monotone in each parameter", "[bounds]") {
    TailBoundQuery base{100, 2.0, 1.0, 1.0, 1.0};
    double b0 = theorem1_log_bound(base).log_bound;
    REQUIRE(theorem1_log_bound({200, 2.0, 1.0, 1.0, 1.0}).log_bound < b0);
    REQUIRE(theorem1_log_bound({100, 2.5, 1.0, 1.0, 1.0}).log_bound < b0);
    REQUIRE(theorem1_log_bound({100, 2.0, 1.5, 1.0, 1.0}).log_bound < b0);
    REQUIRE(theorem1_log_bound({100, 2.0, 1.0, 2.0, 1.0}).log_bound > b0);
    REQUIRE(theorem1_log_bound({100, 2.0, 1.0, 1.0, 1.5}).log_bound > b0);
}

TEST_CASE("rate-form bound matches the threshold-form bound", "[bounds]") {
    RateQuery q{100, 1.0, 1.0, 1.0, kE};
    RateBound r = theorem2_log_bound(q);
    REQUIRE_THAT(r.epsilon_n, WithinRel(3.718281828459045, 1e-14));
    REQUIRE_THAT(r.bound.log_bound, WithinRel(kLn2 - 50.0, 1e-14));

    for (std::uint64_t n : {1ull, 2ull, 5ull, 10ull, 100ull, 1234ull, 10000ull}) {
        for (double alpha : {0.5, 1.0, 2.0}) {
            RateQuery rq{n, alpha, 0.7, 2.0, 1.3};
            RateBound rb = theorem2_log_bound(rq);
            BoundResult direct =
                theorem1_log_bound({n, rb.epsilon_n, 0.7, 2.0, 1.3});
            double tol = 1e-12 * std::max(std::abs(rb.bound.log_bound),
                                          std::abs(direct.log_bound));
            REQUIRE(std::abs(rb.bound.log_bound - direct.log_bound) <= tol);
        }
    }
    REQUIRE_THROWS_AS(theorem2_log_bound({100, 0.0, 1.0, 1.0, 1.0}),
                      std::domain_error);
}

TEST_CASE("reference rate bound matches its closed form", "[bounds]") {
    ReferenceBound r = sung_log_bound(100, 2.0, 2.0 * kE);
    REQUIRE_THAT(r.log_bound, WithinRel(kLn2 - 2.0 * std::log(100.0), 1e-14));
    REQUIRE_THAT(std::exp(r.log_bound), WithinRel(2e-4, 1e-12));
    REQUIRE_THAT(r.epsilon, WithinRel(1.415239933497231, 1e-13));

    ReferenceBound unit = sung_log_bound(2, 1.0, 1.0);
    REQUIRE_THAT(std::exp(unit.log_bound), WithinRel(1.0, 1e-14));

    REQUIRE_THROWS_AS(sung_log_bound(1, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(sung_log_bound(100, -1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(sung_log_bound(100, 1.0, 0.0), std::domain_error);
}

TEST_CASE("chernoff curve is linear and minimized at half delta", "[bounds]") {
    const double n = 50;
    const double eps = 2.0;
    const double K = 1.3;
    const double M = 1.0;
    const double delta = 0.8;
    // Linear in lambda: two points determine the whole curve.
    double c1 = chernoff_log_curve(0.1, n, eps, K, M);
    double c2 = chernoff_log_curve(0.3, n, eps, K, M);
    double slope = (c2 - c1) / 0.2;
    REQUIRE_THAT(slope, WithinRel(-n * (eps - K), 1e-12));
    // One-sided exponent: the intercept is log M, without the factor 2.
    REQUIRE(chernoff_log_curve(0.0, n, eps, K, M) == std::log(M));

    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    const std::size_t grid = 10000;
    for (std::size_t i = 1; i <= grid; ++i) {
        double lam = (0.5 * delta) * (double(i) / double(grid));
        double v = chernoff_log_curve(lam, n, eps, K, M);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    REQUIRE(best == grid);
    double lam_best = (0.5 * delta) * (double(grid) / double(grid));
    REQUIRE(lam_best == 0.5 * delta);
    // The two-sided bound is log 2 plus the optimal one-sided exponent.
    REQUIRE_THAT(best_val + kLn2,
                 WithinRel(theorem1_log_bound({50, eps, delta, M, K}).log_bound,
                           1e-13));
}

TEST_CASE("bound comparison rows carry exact rate constants", "[bounds]") {
    std::vector<std::uint64_t> grid{10, 100, 1000};
    auto rows = compare_bounds(DistributionSpec{Rademacher{}}, 1.0, grid, 1.0, 1.0);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        REQUIRE(row.k_ratio == 2.0);
        REQUIRE(row.alpha == 1.0);
        REQUIRE(row.log_new_at_shared <= row.log_ref_at_shared + 1e-12);
    }
    REQUIRE(rows[1].n == 100);
    REQUIRE_THAT(rows[1].log_bound_new, WithinRel(kLn2 - 50.0, 1e-13));
    REQUIRE_THAT(rows[1].eps_new, WithinRel(1.0 + kE, 1e-14));

    REQUIRE_THROWS_AS(compare_bounds(DistributionSpec{Rademacher{}}, 1.0, {}, 1.0, 1.0),
                      std::domain_error);
    REQUIRE_THROWS_AS(
        compare_bounds(DistributionSpec{Laplace{1.0}}, 1.0, grid, 1.0, 1.0),
        std::domain_error);
}
