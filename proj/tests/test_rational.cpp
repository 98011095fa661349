#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rounderr/rational.hpp"

using namespace rounderr;

TEST_CASE("parse_rational grammar") {
    CHECK(parse_rational("2^-24") == pow2(-24));
    CHECK(parse_rational("2^24") == Rational(16777216));
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("1e9") == Rational(1000000000));
    CHECK(parse_rational("1.5e3") == Rational(1500));
    CHECK(parse_rational("486.66") == Rational(24333, 50));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("parse_count") {
    CHECK(parse_count("1e9") == 1000000000ull);
    CHECK(parse_count("2e9") == 2000000000ull);
    CHECK(parse_count("1e10") == 10000000000ull);
    CHECK(parse_count("18446744073709551615") == UINT64_MAX);
    CHECK_THROWS_AS(parse_count("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_count("-3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_count("18446744073709551616"), std::invalid_argument);
}

TEST_CASE("log helpers survive huge exponents") {
    Rational tiny = rational_pow(pow2(-24), 44);  // 2^-1056, far below binary64
    CHECK(log2_rational(tiny) == doctest::Approx(-1056.0).epsilon(1e-12));
    CHECK(ln_rational(Rational(1)) == 0.0);
    CHECK(log10_rational(Rational(1000)) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(std::isinf(ln_rational(Rational(0))));
}

TEST_CASE("rational_from_double is exact") {
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(0.1) != Rational(1, 10));  // 0.1 is not a dyadic
    CHECK(to_double(rational_from_double(0.1)) == 0.1);
}

TEST_CASE("to_string round trip") {
    CHECK(to_string(Rational(3, 4)) == "3/4");
    CHECK(to_string(Rational(5)) == "5");
    CHECK(parse_rational(to_string(Rational(-7, 3))) == Rational(-7, 3));
}
