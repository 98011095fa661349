#include "rounderr/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rounderr {

Rational rational_pow(const Rational& base, unsigned long exponent) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    // base is canonical, so num^e / den^e already is.
    return out;
}

Rational pow2(long k) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0) return Rational(p);
    return Rational(1) / Rational(p);
}

mpz_class factorial(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

namespace {

double ln_mpz(const mpz_class& z) {
    if (sgn(z) <= 0) throw std::domain_error("ln of non-positive integer");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

}  // namespace

double ln_rational(const Rational& q) {
    if (sgn(q) < 0) throw std::domain_error("ln of negative rational");
    if (sgn(q) == 0) return -std::numeric_limits<double>::infinity();
    return ln_mpz(q.get_num()) - ln_mpz(q.get_den());
}

double log2_rational(const Rational& q) { return ln_rational(q) / M_LN2; }

double log10_rational(const Rational& q) { return ln_rational(q) / M_LN10; }

double to_double(const Rational& q) { return q.get_d(); }

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

[[noreturn]] void bad_number(std::string_view text) {
    throw std::invalid_argument("cannot parse number: '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// sign? digits [. digits] [eE sign? digits], exact decimal-to-rational.
Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view es = s.substr(epos + 1);
        s = s.substr(0, epos);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (!all_digits(es) || es.size() > 9) bad_number(text);
        for (char c : es) exp10 = exp10 * 10 + (c - '0');
        if (eneg) exp10 = -exp10;
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view frac = s.substr(dot + 1);
        digits = std::string(s.substr(0, dot)) + std::string(frac);
        exp10 -= static_cast<long>(frac.size());
        if (s.substr(0, dot).empty() && frac.empty()) bad_number(text);
        if ((!s.substr(0, dot).empty() && !all_digits(s.substr(0, dot))) ||
            (!frac.empty() && !all_digits(frac)))
            bad_number(text);
    } else {
        if (!all_digits(s)) bad_number(text);
        digits = std::string(s);
    }
    if (digits.empty()) bad_number(text);
    mpz_class mantissa(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational q = exp10 >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) bad_number(text);

    if (s.size() > 2 && (s.substr(0, 2) == "2^" || s.substr(0, 3) == "-2^")) {
        bool neg = s.front() == '-';
        std::string_view es = s.substr(neg ? 3 : 2);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (!all_digits(es) || es.size() > 7) bad_number(text);
        long k = 0;
        for (char c : es) k = k * 10 + (c - '0');
        Rational q = pow2(eneg ? -k : k);
        return neg ? Rational(-q) : q;
    }

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational num = parse_decimal(s.substr(0, slash));
        Rational den = parse_decimal(s.substr(slash + 1));
        if (sgn(den) == 0) bad_number(text);
        return num / den;
    }

    return parse_decimal(s);
}

std::uint64_t parse_count(std::string_view text) {
    Rational q = parse_rational(text);
    if (sgn(q) < 0) throw std::invalid_argument("count must be nonnegative");
    if (q.get_den() != 1) throw std::invalid_argument("count must be an integer");
    mpz_class n = q.get_num();
    if (sgn(n) != 0 && mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
        throw std::invalid_argument("count exceeds 64 bits");
    mpz_class lo = n & mpz_class(0xFFFFFFFFUL);
    mpz_class hi = n >> 32;
    return (static_cast<std::uint64_t>(hi.get_ui()) << 32) |
           static_cast<std::uint64_t>(lo.get_ui());
}

}  // namespace rounderr
