#include "rounderr/moment_series.hpp"

#include <stdexcept>
#include <utility>

namespace rounderr {

MomentModel::MomentModel(MomentKind kind, Rational u, std::vector<Rational> custom)
    : kind_(kind), u_(std::move(u)), custom_(std::move(custom)) {
    if (sgn(u_) <= 0) throw std::invalid_argument("half-width u must be positive");
    for (unsigned j = 1; j <= custom_.size(); ++j) {
        const Rational& m = custom_[j - 1];
        if (sgn(m) < 0) throw std::invalid_argument("custom moment bound is negative");
        if (m > rational_pow(u_, 2 * j))
            throw std::invalid_argument("custom moment bound exceeds u^(2j) support bound");
    }
}

MomentModel MomentModel::uniform_bounded(Rational u) {
    return MomentModel(MomentKind::kUniformBounded, std::move(u), {});
}

MomentModel MomentModel::support_bounded(Rational u) {
    return MomentModel(MomentKind::kSupportBounded, std::move(u), {});
}

MomentModel MomentModel::custom(Rational u, std::vector<Rational> even_moment_bounds) {
    return MomentModel(MomentKind::kCustom, std::move(u), std::move(even_moment_bounds));
}

Rational MomentModel::moment_bound(unsigned j) const {
    if (j == 0) return Rational(1);
    switch (kind_) {
        case MomentKind::kUniformBounded:
            return rational_pow(u_, 2 * j) / Rational(2 * j + 1);
        case MomentKind::kSupportBounded:
            return rational_pow(u_, 2 * j);
        case MomentKind::kCustom:
            if (j > custom_.size()) throw std::invalid_argument("insufficient custom moments");
            return custom_[j - 1];
    }
    throw std::logic_error("unreachable");
}

MomentSeries::MomentSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("series needs at least the constant term");
    if (coeffs_[0] != 1) throw std::invalid_argument("series constant term must be 1");
    for (const Rational& c : coeffs_)
        if (sgn(c) < 0) throw std::invalid_argument("series coefficients must be nonnegative");
}

MomentSeries MomentSeries::identity(unsigned order) {
    std::vector<Rational> c(order + 1, Rational(0));
    c[0] = 1;
    return MomentSeries(std::move(c));
}

MomentSeries series_for_variable(const MomentModel& model, unsigned order) {
    if (order < 1) throw std::invalid_argument("series order must be at least 1");
    std::vector<Rational> c(order + 1);
    c[0] = 1;
    for (unsigned j = 1; j <= order; ++j)
        c[j] = model.moment_bound(j) / Rational(factorial(2 * j));
    return MomentSeries(std::move(c));
}

MomentSeries series_product(const MomentSeries& a, const MomentSeries& b) {
    if (a.order() != b.order()) throw std::invalid_argument("series order mismatch");
    const unsigned K = a.order();
    std::vector<Rational> c(K + 1, Rational(0));
    for (unsigned j = 0; j <= K; ++j) {
        Rational acc(0);
        for (unsigned i = 0; i <= j; ++i) acc += a.coeff(i) * b.coeff(j - i);
        c[j] = std::move(acc);
    }
    return MomentSeries(std::move(c));
}

MomentSeries series_power(const MomentSeries& a, std::uint64_t n) {
    MomentSeries result = MomentSeries::identity(a.order());
    MomentSeries base = a;
    while (n != 0) {
        if (n & 1) result = series_product(result, base);
        n >>= 1;
        if (n != 0) base = series_product(base, base);
    }
    return result;
}

Rational moment_bound(const MomentSeries& s, unsigned k) {
    if (k == 0) return Rational(1);
    if (k > s.order()) throw std::invalid_argument("order exceeds truncation");
    return Rational(factorial(2 * k)) * s.coeff(k);
}

Rational closed_form_moment(std::uint64_t n, const Rational& u, unsigned k) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (sgn(u) <= 0) throw std::invalid_argument("u must be positive");
    const Rational N(mpz_class(static_cast<unsigned long>(n)));
    // Falling factorials n(n-1)...(n-j+1).
    const Rational f1 = N;
    const Rational f2 = f1 * (N - 1);
    const Rational f3 = f2 * (N - 2);
    const Rational f4 = f3 * (N - 3);
    switch (k) {
        case 1:
            return rational_pow(u, 2) * (f1 / 3);
        case 2:
            return rational_pow(u, 4) * (f1 / 5 + f2 / 3);
        case 3:
            return rational_pow(u, 6) * (f1 / 7 + f2 + Rational(5, 9) * f3);
        case 4:
            return rational_pow(u, 8) * (f1 / 9 + Rational(41, 15) * f2 +
                                         Rational(14, 3) * f3 + Rational(35, 27) * f4);
        default:
            throw std::invalid_argument("no closed form");
    }
}

Rational brute_force_moment(std::span<const MomentModel> models, unsigned k,
                            std::uint64_t composition_cap) {
    if (models.empty()) throw std::invalid_argument("need at least one variable");
    if (k == 0) return Rational(1);
    const std::size_t n = models.size();

    mpz_class ncomp = binomial(k + static_cast<unsigned long>(n) - 1,
                               static_cast<unsigned long>(n) - 1);
    if (ncomp > mpz_class(static_cast<unsigned long>(composition_cap)))
        throw std::overflow_error("composition count " + ncomp.get_str() +
                                  " exceeds cap " + std::to_string(composition_cap));

    const mpz_class full_fact = factorial(2 * k);
    // Per-variable table of m_j / (2j)!, j = 0..k.
    std::vector<std::vector<Rational>> table(n);
    for (std::size_t i = 0; i < n; ++i) {
        table[i].resize(k + 1);
        for (unsigned j = 0; j <= k; ++j)
            table[i][j] = models[i].moment_bound(j) / Rational(factorial(2 * j));
    }

    Rational total(0);
    std::vector<unsigned> parts(n, 0);
    parts[0] = k;
    for (;;) {
        Rational term(full_fact);
        for (std::size_t i = 0; i < n; ++i)
            if (parts[i] != 0) term *= table[i][parts[i]];
        total += term;

        // Next composition in colex-style order: move one unit from the first
        // nonzero part into its right neighbor, sweeping the remainder back.
        std::size_t i = 0;
        while (i < n && parts[i] == 0) ++i;
        if (i == n - 1) break;
        unsigned v = parts[i];
        parts[i] = 0;
        parts[0] = v - 1;
        parts[i + 1] += 1;
    }
    return total;
}

}  // namespace rounderr
