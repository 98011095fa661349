#pragma once

#include "rounderr/moment_series.hpp"

namespace rounderr {

// One tail-bound evaluation: which moment order was used, the exact moment
// bound, and the epsilon/probability pair it produces. probability underflows
// to 0 below ~1e-308; log10_probability stays meaningful.
struct TailBoundResult {
    unsigned k_used = 0;          // moment order is 2k
    Rational moment;              // upper bound on E(S^{2k})
    double log10_moment = 0;
    double epsilon = 0;
    double probability = 0;
    double log10_probability = 0;
    bool levy_factor_applied = false;
};

// min(1, moment/epsilon^{2k}), evaluated in the log domain. Endpoint-only
// bound P(|S_n| >= epsilon).
double markov_tail(const Rational& moment, unsigned k, double epsilon);

// min(1, 2 * markov_tail): bound on P(max_i |S_i| >= epsilon) for partial
// sums of independent symmetric variables (maximal-inequality factor).
double levy_max_tail(const Rational& moment, unsigned k, double epsilon);

// Smallest epsilon certified at failure probability P using order 2k:
//   epsilon = ((levy factor) * E(S^{2k}) / P)^(1/(2k)).
double epsilon_for_probability(const MomentSeries& s, unsigned k, double P, bool use_levy);

// Full record for a fixed order.
TailBoundResult tail_for_probability(const MomentSeries& s, unsigned k, double P,
                                     bool use_levy);
TailBoundResult tail_for_epsilon(const MomentSeries& s, unsigned k, double epsilon,
                                 bool use_levy);

// Exhaustive scan of k = 1..k_max for the smallest epsilon at probability P;
// ties break toward smaller k. No unimodality assumed.
TailBoundResult optimize_k(const MomentSeries& s, double P, bool use_levy, unsigned k_max);

// Same scan minimizing the probability bound at a fixed epsilon.
TailBoundResult optimize_k_for_epsilon(const MomentSeries& s, double epsilon, bool use_levy,
                                       unsigned k_max);

// Leading-order epsilon for the self-scaling family n = u^{-3/2}, m = 1,
// P = u^{3/2} (max-excursion bound, orders 2k = 2,4,6,8):
//   k=1: (4 u^-2 / 9)^(1/4)      k=2: (4 u^-1 / 9)^(1/8)
//   k=3: (100/81)^(1/12)         k=4: (4900 u / 729)^(1/16)
double asymptotic_epsilon(double u, unsigned k);

// log2 of the same, in the closed forms used for bit counting.
double asymptotic_log2_epsilon(double u, unsigned k);

// log2(epsilon): the number of significant bits; negative values mean bits
// below the binary point remain significant.
double significant_bits(double epsilon);

}  // namespace rounderr
