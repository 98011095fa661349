#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rounderr/tail_bounds.hpp"

using namespace rounderr;

namespace {

MomentSeries table_block_series(std::uint64_t total_vars, unsigned order = 32) {
    auto one = series_for_variable(MomentModel::uniform_bounded(pow2(-24)), order);
    return series_power(one, total_vars);
}

}  // namespace

TEST_CASE("markov_tail basics") {
    CHECK(markov_tail(Rational(1), 1, 1.0) == 1.0);
    CHECK(markov_tail(Rational(0), 3, 0.5) == 0.0);
    CHECK(markov_tail(Rational(1, 3), 1, 2.0) == doctest::Approx(1.0 / 12).epsilon(1e-14));
    CHECK_THROWS_AS(markov_tail(Rational(1), 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(markov_tail(Rational(1), 1, -1.0), std::invalid_argument);
}

TEST_CASE("markov_tail reproduces the 2k=2 accumulation row") {
    // 2e9 variables, u = 2^-24: E(S^2) = u^2 n/3; at the published epsilon the
    // endpoint bound is ~5e-10 and the max-excursion bound ~1e-9.
    Rational moment = closed_form_moment(2'000'000'000ull, pow2(-24), 1);
    double p = markov_tail(moment, 1, 68.825);
    CHECK(p == doctest::Approx(5e-10).epsilon(2e-4));
    CHECK(levy_max_tail(moment, 1, 68.825) == doctest::Approx(1e-9).epsilon(2e-4));
}

TEST_CASE("levy_max_tail clamps and doubles") {
    CHECK(levy_max_tail(Rational(1), 1, 1.2) == 1.0);  // markov >= 1/2
    CHECK(levy_max_tail(Rational(1, 3), 1, 2.0) == doctest::Approx(1.0 / 6).epsilon(1e-14));
}

TEST_CASE("epsilon_for_probability examples") {
    auto s1 = table_block_series(2'000'000'000ull);
    CHECK(epsilon_for_probability(s1, 2, 1e-9, true) == doctest::Approx(0.42832).epsilon(2e-4));
    CHECK(epsilon_for_probability(s1, 4, 1e-9, true) == doctest::Approx(0.040042).epsilon(2e-4));

    auto single = series_for_variable(MomentModel::support_bounded(Rational(1)), 4);
    CHECK(epsilon_for_probability(single, 1, 1.0, false) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(epsilon_for_probability(s1, 2, 0.0, true), std::invalid_argument);
    CHECK_THROWS_AS(epsilon_for_probability(s1, 2, 1.5, true), std::invalid_argument);
}

TEST_CASE("optimize_k reproduces the published optimal orders") {
    auto s1 = table_block_series(2'000'000'000ull);
    auto r1 = optimize_k(s1, 1e-9, true, 24);
    CHECK(r1.k_used == 22);  // 2k = 44
    CHECK(r1.epsilon == doctest::Approx(0.010153).epsilon(2e-4));

    auto s2 = table_block_series(10'000'000'000ull);
    auto r2 = optimize_k(s2, 1e-10, true, 24);
    CHECK(r2.k_used == 24);  // 2k = 48
    CHECK(r2.epsilon == doctest::Approx(0.023873).epsilon(2e-4));

    auto fixed = optimize_k(s1, 1e-9, true, 1);
    CHECK(fixed.k_used == 1);
    CHECK(fixed.epsilon == doctest::Approx(68.825).epsilon(2e-4));
}

TEST_CASE("optimize_k never loses to a fixed order") {
    auto s = table_block_series(1'000'000ull, 16);
    for (double P : {1e-3, 1e-6, 1e-12}) {
        auto best = optimize_k(s, P, true, 16);
        for (unsigned k = 1; k <= 16; ++k)
            CHECK(best.epsilon <= epsilon_for_probability(s, k, P, true) * (1 + 1e-12));
    }
}

TEST_CASE("round trip: probability -> epsilon -> probability") {
    auto s = table_block_series(100'000ull, 16);
    for (unsigned k : {1u, 3u, 9u, 16u}) {
        for (double P : {1e-12, 1e-9, 1e-3, 0.5, 0.99}) {
            double eps = epsilon_for_probability(s, k, P, true);
            CHECK(levy_max_tail(moment_bound(s, k), k, eps) == doctest::Approx(P).epsilon(1e-9));
        }
    }
}

TEST_CASE("epsilon_for_probability is monotone") {
    auto s = table_block_series(10'000ull, 8);
    double prev = epsilon_for_probability(s, 3, 1e-12, true);
    for (double P : {1e-9, 1e-6, 1e-3, 0.1, 0.9}) {
        double eps = epsilon_for_probability(s, 3, P, true);
        CHECK(eps < prev);
        prev = eps;
    }
    // larger coefficients -> larger epsilon
    auto bigger = series_power(series_for_variable(MomentModel::support_bounded(pow2(-24)), 8),
                               10'000ull);
    CHECK(epsilon_for_probability(bigger, 3, 1e-6, true) >
          epsilon_for_probability(s, 3, 1e-6, true));
}

TEST_CASE("log-domain agrees with direct evaluation in range") {
    // inputs comfortably inside binary64
    Rational moment(17, 5);
    for (double eps : {0.5, 1.0, 3.0, 10.0}) {
        for (unsigned k : {1u, 2u, 3u}) {
            double direct = to_double(moment) / std::pow(eps, 2.0 * k);
            if (direct < 1.0)
                CHECK(markov_tail(moment, k, eps) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("probability outputs stay in [0,1] and keep their logs") {
    auto s = table_block_series(1000ull, 8);
    for (unsigned k = 1; k <= 8; ++k) {
        for (double eps : {1e-6, 1.0, 1e3, 1e9}) {
            auto r = tail_for_epsilon(s, k, eps, true);
            CHECK(r.probability >= 0.0);
            CHECK(r.probability <= 1.0);
            CHECK(r.log10_probability <= 0.0);
        }
    }
    // far beyond binary64: the probability underflows but its log is exact
    auto big = table_block_series(2'000'000'000ull);
    auto r = tail_for_epsilon(big, 22, 1e6, true);
    CHECK(r.probability == 0.0);
    CHECK(r.log10_probability < -300.0);
    CHECK(std::isfinite(r.log10_probability));
}

TEST_CASE("asymptotic epsilons") {
    CHECK(asymptotic_epsilon(0.37, 3) == doctest::Approx(std::pow(100.0 / 81, 1.0 / 12)).epsilon(1e-15));
    CHECK(asymptotic_epsilon(1.0, 2) == doctest::Approx(std::pow(4.0 / 9, 0.125)).epsilon(1e-15));
    const double u = std::ldexp(1.0, -24);
    CHECK(std::log2(asymptotic_epsilon(u, 1)) ==
          doctest::Approx(asymptotic_log2_epsilon(u, 1)).epsilon(1e-12));
    CHECK(std::log2(asymptotic_epsilon(u, 4)) ==
          doctest::Approx(asymptotic_log2_epsilon(u, 4)).epsilon(1e-12));
    CHECK_THROWS_AS(asymptotic_epsilon(0.5, 5), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_epsilon(0.0, 1), std::invalid_argument);
}

TEST_CASE("significant_bits") {
    CHECK(significant_bits(68.825) == doctest::Approx(6.10).epsilon(1e-3));
    CHECK(significant_bits(1.0) == 0.0);
    CHECK(significant_bits(0.010153) == doctest::Approx(-6.62).epsilon(1e-3));
    CHECK_THROWS_AS(significant_bits(0.0), std::invalid_argument);
}
