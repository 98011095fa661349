#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rounderr/filter.hpp"
#include "rounderr/tail_bounds.hpp"

using namespace rounderr;

TEST_CASE("filter validation") {
    CHECK_THROWS_AS((FilterSpec{1.0, 0.125}.validate()), std::domain_error);  // real roots
    CHECK_THROWS_AS((FilterSpec{0.0, 0.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((FilterSpec{0.0, -1.0}.validate()), std::domain_error);
    CHECK_NOTHROW((FilterSpec{0.0, 0.25}.validate()));
    CHECK(FilterSpec{0.0, 0.25}.stable());
    CHECK_FALSE(FilterSpec{0.0, 1.0}.stable());
}

TEST_CASE("impulse response of (b1=0, b2=1/4)") {
    auto y = impulse_response(FilterSpec{0.0, 0.25}, 6);
    const double expect[] = {1.0, 0.0, -0.25, 0.0, 0.0625, 0.0, -0.015625};
    for (int i = 0; i <= 6; ++i) CHECK(y[i] == expect[i]);
}

TEST_CASE("impulse response satisfies the recurrence") {
    SUBCASE("exact rationals have zero residual") {
        auto y = impulse_response_exact(Rational(-1, 3), Rational(1, 2), 64);
        CHECK(y[0] == 1);
        for (std::size_t i = 2; i < y.size(); ++i)
            REQUIRE(y[i] + Rational(-1, 3) * y[i - 1] + Rational(1, 2) * y[i - 2] == 0);
    }
    SUBCASE("binary64 recurrence matches the exact one closely") {
        FilterSpec f{-0.375, 0.5};
        auto yd = impulse_response(f, 200);
        auto yq = impulse_response_exact(rational_from_double(f.b1),
                                         rational_from_double(f.b2), 200);
        for (std::size_t i = 0; i < yd.size(); ++i) {
            const double exact = to_double(yq[i]);
            const double tol = 4 * std::ldexp(1.0, -52) * (std::fabs(exact) + 1e-300);
            CHECK(std::fabs(yd[i] - exact) <= std::max(tol, 1e-18));
        }
    }
}

TEST_CASE("envelope constant bounds |y_n|/r^n, running max converges") {
    const FilterSpec filters[] = {{0.0, 0.25}, {-0.5, 0.3}, {0.9, 0.9}, {0.2, 0.99}};
    for (const auto& f : filters) {
        const double r = std::sqrt(f.b2);
        const double c = envelope_constant(f);
        auto y = impulse_response(f, 10000);
        double running = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double rn = std::pow(r, double(i));
            if (rn < 1e-250) break;  // below this the normalization itself underflows
            running = std::max(running, std::fabs(y[i]) / rn);
            REQUIRE(running <= c * (1 + 1e-9));
        }
        CHECK(running > 0.9);  // the envelope is actually approached
    }
}

TEST_CASE("bibo_bound") {
    CHECK(bibo_bound(FilterSpec{0.0, 0.25}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bibo_bound(FilterSpec{0.0, 0.9999}) > 5000.0);  // pole at sqrt(b2) -> 1
    CHECK_THROWS_AS(bibo_bound(FilterSpec{0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(bibo_bound(FilterSpec{0.0, 1.5}), std::domain_error);
}

TEST_CASE("exact_coefficient_sum") {
    // sum of 4^-m geometric series
    CHECK(exact_coefficient_sum(FilterSpec{0.0, 0.25}, 1e-12) ==
          doctest::Approx(4.0 / 3).epsilon(1e-12));
    CHECK(exact_coefficient_sum(FilterSpec{0.0, 1.0 / 16}, 1e-12) ==
          doctest::Approx(16.0 / 15).epsilon(1e-12));
    // tightening the tolerance moves the result by at most the old tolerance
    double coarse = exact_coefficient_sum(FilterSpec{0.3, 0.7}, 1e-6);
    double fine = exact_coefficient_sum(FilterSpec{0.3, 0.7}, 1e-12);
    CHECK(std::fabs(coarse - fine) <= 1e-6);
    CHECK_THROWS_AS(exact_coefficient_sum(FilterSpec{0.0, 1.0}, 1e-9), std::domain_error);
}

TEST_CASE("closed-form bound vs exact sum disagree on (0, 1/4)") {
    // the closed form gives 1 while the true coefficient sum is 4/3; both are
    // reported, bound computations use the exact sum
    CHECK(bibo_bound(FilterSpec{0.0, 0.25}) < exact_coefficient_sum(FilterSpec{0.0, 0.25}, 1e-12));
}

TEST_CASE("filter_error_scenario at a small horizon") {
    // weights |y_3|,|y_2|,|y_1|,|y_0| = 0, 1/4, 0, 1 -> one variable at u, one at u/4
    auto s = filter_error_scenario(FilterSpec{0.0, 0.25}, 4, Rational(1, 16), 1);
    REQUIRE(s.groups.size() == 2);
    CHECK(s.groups[0].model.half_width() == Rational(1, 16));
    CHECK(s.groups[0].count == 1);
    CHECK(s.groups[1].model.half_width() == Rational(1, 64));
    CHECK(s.groups[1].count == 1);
    CHECK_FALSE(s.degenerate);
}

TEST_CASE("identity weights reproduce the accumulation scenario") {
    std::vector<double> ones(37, 1.0);
    auto s = scenario_from_weights(ones, pow2(-24), 2, 64, "flat");
    auto ref = accumulation_scenario(37, 2, pow2(-24));
    CHECK(scenario_series(s, 8) == scenario_series(ref, 8));
}

TEST_CASE("all-zero weights are degenerate") {
    std::vector<double> zeros(5, 0.0);
    auto s = scenario_from_weights(zeros, Rational(1), 1, 64, "dead");
    CHECK(s.degenerate);
    CHECK(s.groups.empty());
}

TEST_CASE("weight quantization rounds up and refines monotonically") {
    FilterSpec f{-1.2, 0.72};  // rich weight spectrum
    const std::uint64_t horizon = 400;
    const Rational u = pow2(-24);

    auto exact = filter_error_scenario(f, horizon, u, 1, 1u << 30);  // no quantization
    Rational exact_m2 = moment_bound(scenario_series(exact, 4), 1);

    double prev_eps = 0;
    for (unsigned buckets : {8u, 16u, 32u, 64u}) {
        auto s = filter_error_scenario(f, horizon, u, 1, buckets);
        CHECK(s.groups.size() <= buckets);
        Rational m2 = moment_bound(scenario_series(s, 4), 1);
        CHECK(m2 >= exact_m2);  // upper-bound property
        double eps = epsilon_for_probability(scenario_series(s, 4), 2, 1e-6, false);
        if (prev_eps > 0) CHECK(eps <= prev_eps * (1 + 1e-12));  // refinement helps
        prev_eps = eps;
    }
}

TEST_CASE("scenario second moment obeys the coefficient-sum bound") {
    FilterSpec f{0.0, 0.25};
    const Rational u(1);
    auto s = filter_error_scenario(f, 64, u, 1, 1u << 30);
    Rational m2 = moment_bound(scenario_series(s, 2), 1);
    const double csum = exact_coefficient_sum(f, 1e-12);
    // E(S^2) <= (u^2/3) sum y_i^2 <= (u^2/3) (sum |y_i|)^2
    CHECK(to_double(m2) <= csum * csum / 3.0 + 1e-12);
}

TEST_CASE("unstable filters still give finite fixed-horizon scenarios") {
    FilterSpec f{0.0, 1.0};  // |weights| <= 1 forever
    auto s = filter_error_scenario(f, 256, Rational(1, 4), 1);
    CHECK_FALSE(s.degenerate);
    Rational m2 = moment_bound(scenario_series(s, 2), 1);
    CHECK(to_double(m2) <= 256.0 * (1.0 / 16) / 3.0 + 1e-12);
}
