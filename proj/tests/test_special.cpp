#include <catch2/catch_amalgamated.hpp>

#include <tailbound/special.hpp>

#include <cmath>
#include <stdexcept>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace tailbound;

TEST_CASE("compensated summation survives catastrophic cancellation", "[special]") {
    NeumaierSum s;
    s.add(1.0);
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    REQUIRE(s.value() == 2.0);
}

TEST_CASE("normal cdf matches reference values", "[special]") {
    REQUIRE(normal_cdf(0.0) == 0.5);
    REQUIRE_THAT(normal_cdf(1.0), WithinRel(0.8413447460685429, 1e-14));
    REQUIRE_THAT(normal_cdf(0.5), WithinRel(0.6914624612740131, 1e-14));
    REQUIRE_THAT(normal_cdf(-2.3), WithinRel(0.010724110021675805, 1e-13));
    REQUIRE(normal_cdf(-40.0) >= 0.0);
    REQUIRE(normal_cdf(40.0) == 1.0);
}

TEST_CASE("regularized incomplete beta matches reference values", "[special]") {
    REQUIRE_THAT(reg_inc_beta(2.5, 3.5, 0.4), WithinRel(0.4869041915261174, 1e-12));
    REQUIRE_THAT(reg_inc_beta(2.5, 3.5, 0.7), WithinRel(0.9228190654779193, 1e-12));
    REQUIRE_THAT(reg_inc_beta(1.0, 1000.0, 0.001), WithinRel(0.632304575229036, 1e-12));
    REQUIRE_THAT(reg_inc_beta(0.5, 0.5, 0.5), WithinRel(0.5, 1e-12));
    REQUIRE_THAT(reg_inc_beta(8.0, 2.0, 0.9), WithinRel(0.7748409780000001, 1e-12));
    REQUIRE(reg_inc_beta(2.0, 3.0, 0.0) == 0.0);
    REQUIRE(reg_inc_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("incomplete beta satisfies the reflection identity", "[special]") {
    const double as[] = {0.5, 1.0, 2.5, 8.0, 40.0};
    const double bs[] = {0.7, 1.0, 3.5, 2.0, 17.0};
    const double xs[] = {0.05, 0.3, 0.5, 0.8, 0.99};
    for (double a : as)
        for (double b : bs)
            for (double x : xs) {
                double lhs = reg_inc_beta(a, b, x);
                double rhs = 1.0 - reg_inc_beta(b, a, 1.0 - x);
                REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-12));
            }
}

TEST_CASE("incomplete beta inverse round-trips", "[special]") {
    const double as[] = {0.5, 1.0, 2.5, 8.0, 100.0};
    const double bs[] = {0.7, 1.0, 3.5, 2.0, 50.0};
    const double ps[] = {0.005, 0.05, 0.5, 0.95, 0.995};
    for (double a : as)
        for (double b : bs)
            for (double p : ps) {
                double x = reg_inc_beta_inv(a, b, p);
                REQUIRE(x >= 0.0);
                REQUIRE(x <= 1.0);
                REQUIRE_THAT(reg_inc_beta(a, b, x), WithinAbs(p, 1e-10));
            }
}

TEST_CASE("binomial upper limits match reference values", "[special]") {
    REQUIRE_THAT(binom_upper_limit(0, 1000000, 0.95),
                 WithinRel(2.9957277863525433e-06, 1e-9));
    REQUIRE_THAT(binom_upper_limit(3, 50, 0.99),
                 WithinRel(0.18720925616529482, 1e-9));
    REQUIRE_THAT(binom_upper_limit(0, 100, 0.99),
                 WithinRel(0.045007413978564045, 1e-9));
    REQUIRE_THAT(binom_upper_limit(17, 1000, 0.99),
                 WithinRel(0.02912922472764841, 1e-9));
    REQUIRE_THAT(binom_upper_limit(999999, 1000000, 0.99),
                 WithinRel(0.9999999899496642, 1e-9));
    REQUIRE_THAT(binom_upper_limit(2, 2000, 0.99),
                 WithinRel(0.004196248126538968, 1e-9));
    REQUIRE_THAT(binom_upper_limit(0, 20000, 0.99),
                 WithinRel(0.00023023200184341365, 1e-9));
    REQUIRE(binom_upper_limit(50, 50, 0.99) == 1.0);
}

TEST_CASE("binomial lower limits match reference values", "[special]") {
    REQUIRE_THAT(binom_lower_limit(3, 50, 0.99),
                 WithinRel(0.008860761445872549, 1e-9));
    REQUIRE_THAT(binom_lower_limit(17, 1000, 0.99),
                 WithinRel(0.008926388375891771, 1e-9));
    REQUIRE_THAT(binom_lower_limit(999999, 1000000, 0.99),
                 WithinRel(0.9999933616666467, 1e-9));
    REQUIRE(binom_lower_limit(0, 50, 0.99) == 0.0);
}

TEST_CASE("two-sided intervals match reference values and bracket p-hat", "[special]") {
    auto [lo1, hi1] = binom_interval(3, 50, 0.99);
    REQUIRE_THAT(lo1, WithinRel(0.006872485332951645, 1e-9));
    REQUIRE_THAT(hi1, WithinRel(0.20270626946864323, 1e-9));

    auto [lo2, hi2] = binom_interval(42, 100, 0.95);
    REQUIRE_THAT(lo2, WithinRel(0.32198553935479696, 1e-9));
    REQUIRE_THAT(hi2, WithinRel(0.5228808042760862, 1e-9));

    for (long h : {0L, 1L, 25L, 49L, 50L}) {
        auto [lo, hi] = binom_interval(h, 50, 0.99);
        double phat = double(h) / 50.0;
        REQUIRE(lo <= phat);
        REQUIRE(hi >= phat);
    }
}

TEST_CASE("count and confidence validation rejects bad input", "[special]") {
    REQUIRE_THROWS_AS(binom_upper_limit(5, 4, 0.99), std::domain_error);
    REQUIRE_THROWS_AS(binom_upper_limit(0, 0, 0.99), std::domain_error);
    REQUIRE_THROWS_AS(binom_upper_limit(1, 4, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(binom_upper_limit(1, 4, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(binom_interval(1, 4, 1.5), std::domain_error);
    REQUIRE_THROWS_AS(reg_inc_beta(0.0, 1.0, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(reg_inc_beta(1.0, 1.0, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(reg_inc_beta_inv(1.0, 1.0, 1.5), std::domain_error);
}
