#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rounderr/scenarios.hpp"

namespace rounderr {

// Second-order recursive filter y_i = d_i - b1*y_{i-1} - b2*y_{i-2},
// restricted to complex characteristic roots (b1^2 < 4*b2). The roots have
// modulus sqrt(b2); the filter is BIBO stable iff b2 < 1.
struct FilterSpec {
    double b1 = 0;
    double b2 = 0;

    bool stable() const { return b2 < 1.0; }
    void validate() const;  // throws for real roots or b2 <= 0
};

// Impulse response y_0..y_n of the error recurrence
//   y_{-1} = 0, y_0 = 1, y_i = -b1*y_{i-1} - b2*y_{i-2}.
std::vector<double> impulse_response(const FilterSpec& f, std::size_t n);

// Same recurrence in exact rationals, for residual-free checks.
std::vector<Rational> impulse_response_exact(const Rational& b1, const Rational& b2,
                                             std::size_t n);

// Closed-form accumulated-effect bound sqrt(b2 + 2*b1^2)/(1 - sqrt(b2)).
// Throws "filter not BIBO stable" for b2 >= 1. See exact_coefficient_sum for
// the certified alternative; the two disagree (this one can undershoot).
double bibo_bound(const FilterSpec& f);

// Smallest constant C with |y_n| <= C * b2^{n/2} for all n, from the exact
// solution of the recurrence: C = 2*sqrt(b2)/sqrt(4*b2 - b1^2).
double envelope_constant(const FilterSpec& f);

// Sum of |y_i| over all i, within +-tol, by summing the recurrence until the
// certified geometric tail C*r^N/(1-r), r = sqrt(b2), drops below tol.
double exact_coefficient_sum(const FilterSpec& f, double tol);

// Error at a chosen horizon n: sum over steps i of (m errors of half-width u
// injected at step i) weighted by |y_{n-i}|. Distinct weight magnitudes
// become groups; if there are more than `buckets` of them, weights are
// rounded UP to geometric bucket edges, preserving the upper-bound property.
// Zero weights are dropped; an all-zero weight vector yields a scenario
// flagged degenerate.
Scenario filter_error_scenario(const FilterSpec& f, std::uint64_t n, const Rational& u,
                               std::uint64_t m, unsigned buckets = 64);

// The grouping/quantization core, exposed for weight vectors from any source.
Scenario scenario_from_weights(std::span<const double> weights, const Rational& u,
                               std::uint64_t m, unsigned buckets,
                               const std::string& description);

}  // namespace rounderr
