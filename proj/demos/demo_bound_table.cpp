// demo_bound_table.cpp
//
// Minimal library walkthrough: moment profile of one distribution, the
// tail bound over a grid of n, and an exact-tail cross check.

#include <cstdio>

#include <tailbound/tailbound.hpp>

int main() {
    using namespace tailbound;

    // Small delta keeps K below the reach of the centered sum, so the
    // exact-tail column stays nonzero alongside the bound.
    const DistributionSpec dist = DiscreteTable{{-1.0, 0.0, 2.0},
                                                {0.25, 0.5, 0.25}};
    const double delta = 0.1;
    const MomentProfile prof = moment_profile(dist, delta);
    std::printf("dist %s  delta %.2f  K %.6f\n", name(dist).c_str(), delta,
                prof.k_constant);

    const double eps = 1.5;
    std::printf("\n   n   log_bound      bound        exact_tail\n");
    for (const std::uint64_t n : {50, 100, 200, 400}) {
        const BoundResult b =
            theorem1_log_bound({n, eps, delta, 1.0, prof.k_constant});
        const ExactPMF pmf = exact_sum_pmf(dist, n);
        const double tail =
            exact_tail(pmf, static_cast<double>(n) * prof.mean,
                       static_cast<double>(n) * eps);
        std::printf("%4llu  %11.4f  %11.4e  %11.4e\n",
                    static_cast<unsigned long long>(n), b.log_bound,
                    b.bound_clipped, tail);
    }

    const auto rows =
        verify_lemma(dist, delta, {delta / 8.0, delta / 4.0, delta / 2.0},
                     10'000, 7);
    std::printf("\n  lambda   exact_mgf    bound      verdict\n");
    for (const LemmaRow& r : rows) {
        std::printf("  %.4f   %.6f   %.6f   %s\n", r.lambda, r.row.lhs,
                    r.row.rhs, verdict_name(r.row.verdict).c_str());
    }
    return 0;
}
