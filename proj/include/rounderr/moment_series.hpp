#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rounderr/rational.hpp"

namespace rounderr {

enum class MomentKind {
    // E(X^{2j}) <= u^{2j}/(2j+1): the moment sequence of a uniform variable on
    // [-u, u], which majorizes the rounding-error moment bounds 1/3, 1/5, ...
    kUniformBounded,
    // E(X^{2j}) <= u^{2j}: any symmetric variable supported in [-u, u].
    kSupportBounded,
    // Caller-supplied bounds m_j on E(X^{2j}), consistent with support u.
    kCustom,
};

// Symmetric-variable moment-bound family, parameterized by half-width u.
// Odd moments are zero by the symmetry assumption of the whole framework.
class MomentModel {
public:
    static MomentModel uniform_bounded(Rational u);
    static MomentModel support_bounded(Rational u);
    static MomentModel custom(Rational u, std::vector<Rational> even_moment_bounds);

    MomentKind kind() const { return kind_; }
    const Rational& half_width() const { return u_; }
    const std::vector<Rational>& custom_moments() const { return custom_; }

    // Upper bound on E(X^{2j}); j = 0 returns 1.
    // Throws "insufficient custom moments" when a custom model is asked
    // beyond its supplied list.
    Rational moment_bound(unsigned j) const;

    bool operator==(const MomentModel&) const = default;

private:
    MomentModel(MomentKind kind, Rational u, std::vector<Rational> custom);

    MomentKind kind_;
    Rational u_;
    std::vector<Rational> custom_;
};

// Truncated even moment generating series: coeff(j) is an upper bound on
// E(S^{2j})/(2j)!, exact, truncated after j = order(). Multiplying two such
// series (truncated Cauchy product) bounds the series of the sum of the
// underlying independent symmetric variables; truncation is sound because
// every coefficient is nonnegative.
class MomentSeries {
public:
    explicit MomentSeries(std::vector<Rational> coeffs);

    static MomentSeries identity(unsigned order);

    unsigned order() const { return static_cast<unsigned>(coeffs_.size()) - 1; }
    const Rational& coeff(unsigned j) const { return coeffs_.at(j); }
    std::span<const Rational> coeffs() const { return coeffs_; }

    bool operator==(const MomentSeries&) const = default;

private:
    std::vector<Rational> coeffs_;
};

// Series of a single variable: coeff(j) = model.moment_bound(j)/(2j)!.
// For a uniform-bounded variable this is the even series of sinh(uz)/(uz).
MomentSeries series_for_variable(const MomentModel& model, unsigned order);

// Truncated product; requires equal orders.
MomentSeries series_product(const MomentSeries& a, const MomentSeries& b);

// n-fold product by binary exponentiation, O(order^2 log n) coefficient
// multiplications. n = 0 yields the identity series (an empty sum).
MomentSeries series_power(const MomentSeries& a, std::uint64_t n);

// (2k)! * coeff(k): upper bound on E(S^{2k}). Throws when k exceeds the
// truncation order.
Rational moment_bound(const MomentSeries& s, unsigned k);

// The closed forms for E(S_n^{2k}), k = 1..4, of n i.i.d. uniform-bounded
// variables of half-width u. Used as an independent cross-check of the
// series engine.
Rational closed_form_moment(std::uint64_t n, const Rational& u, unsigned k);

inline constexpr std::uint64_t kDefaultCompositionCap = 20'000'000;

// Direct enumeration of the multinomial sum over k_1 + ... + k_n = k:
//   E(S^{2k}) <= sum (2k)! prod_i m^{(i)}_{k_i} / (2k_i)!
// Exponential in n and k; guarded by a cap on the composition count.
Rational brute_force_moment(std::span<const MomentModel> models, unsigned k,
                            std::uint64_t composition_cap = kDefaultCompositionCap);

}  // namespace rounderr
