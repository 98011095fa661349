#include "rounderr/tail_bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rounderr {

namespace {

// ln of (levy factor) * moment / epsilon^{2k}, unclamped.
double ln_tail(const Rational& moment, unsigned k, double epsilon, bool use_levy) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    if (sgn(moment) < 0) throw std::invalid_argument("moment bound must be nonnegative");
    if (sgn(moment) == 0) return -std::numeric_limits<double>::infinity();
    return ln_rational(moment) + (use_levy ? M_LN2 : 0.0) -
           2.0 * static_cast<double>(k) * std::log(epsilon);
}

double clamp_prob(double ln_p) {
    if (ln_p >= 0) return 1.0;
    return std::exp(ln_p);  // underflows to 0 for ln_p < ~-745
}

TailBoundResult make_result(const MomentSeries& s, unsigned k, double epsilon, bool use_levy) {
    TailBoundResult r;
    r.k_used = k;
    r.moment = moment_bound(s, k);
    r.log10_moment = sgn(r.moment) == 0 ? -std::numeric_limits<double>::infinity()
                                        : log10_rational(r.moment);
    r.epsilon = epsilon;
    double lt = ln_tail(r.moment, k, epsilon, use_levy);
    r.probability = clamp_prob(lt);
    r.log10_probability = lt >= 0 ? 0.0 : lt / M_LN10;
    r.levy_factor_applied = use_levy;
    return r;
}

}  // namespace

double markov_tail(const Rational& moment, unsigned k, double epsilon) {
    return clamp_prob(ln_tail(moment, k, epsilon, false));
}

double levy_max_tail(const Rational& moment, unsigned k, double epsilon) {
    return clamp_prob(ln_tail(moment, k, epsilon, true));
}

double epsilon_for_probability(const MomentSeries& s, unsigned k, double P, bool use_levy) {
    if (!(P > 0)) throw std::invalid_argument("P must be positive");
    if (P > 1) throw std::invalid_argument("P must be at most 1");
    Rational m = moment_bound(s, k);
    if (sgn(m) == 0) return 0.0;  // S == 0 almost surely
    double ln_eps =
        (ln_rational(m) + (use_levy ? M_LN2 : 0.0) - std::log(P)) / (2.0 * static_cast<double>(k));
    return std::exp(ln_eps);
}

TailBoundResult tail_for_probability(const MomentSeries& s, unsigned k, double P,
                                     bool use_levy) {
    double eps = epsilon_for_probability(s, k, P, use_levy);
    if (eps == 0.0) {
        TailBoundResult r;
        r.k_used = k;
        r.moment = Rational(0);
        r.log10_moment = -std::numeric_limits<double>::infinity();
        r.epsilon = 0.0;
        r.probability = P;
        r.log10_probability = std::log10(P);
        r.levy_factor_applied = use_levy;
        return r;
    }
    TailBoundResult r = make_result(s, k, eps, use_levy);
    // Report the requested probability, not its round-tripped image.
    r.probability = P;
    r.log10_probability = std::log10(P);
    return r;
}

TailBoundResult tail_for_epsilon(const MomentSeries& s, unsigned k, double epsilon,
                                 bool use_levy) {
    return make_result(s, k, epsilon, use_levy);
}

TailBoundResult optimize_k(const MomentSeries& s, double P, bool use_levy, unsigned k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (k_max > s.order()) throw std::invalid_argument("k_max exceeds series order");
    unsigned best_k = 1;
    double best_eps = epsilon_for_probability(s, 1, P, use_levy);
    for (unsigned k = 2; k <= k_max; ++k) {
        double eps = epsilon_for_probability(s, k, P, use_levy);
        if (eps < best_eps) {
            best_eps = eps;
            best_k = k;
        }
    }
    return tail_for_probability(s, best_k, P, use_levy);
}

TailBoundResult optimize_k_for_epsilon(const MomentSeries& s, double epsilon, bool use_levy,
                                       unsigned k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (k_max > s.order()) throw std::invalid_argument("k_max exceeds series order");
    unsigned best_k = 1;
    double best_ln = ln_tail(moment_bound(s, 1), 1, epsilon, use_levy);
    for (unsigned k = 2; k <= k_max; ++k) {
        double ln_p = ln_tail(moment_bound(s, k), k, epsilon, use_levy);
        if (ln_p < best_ln) {
            best_ln = ln_p;
            best_k = k;
        }
    }
    return tail_for_epsilon(s, best_k, epsilon, use_levy);
}

double asymptotic_epsilon(double u, unsigned k) {
    if (!(u > 0)) throw std::invalid_argument("u must be positive");
    switch (k) {
        case 1:
            return std::pow(4.0 / (9.0 * u * u), 1.0 / 4.0);
        case 2:
            return std::pow(4.0 / (9.0 * u), 1.0 / 8.0);
        case 3:
            return std::pow(100.0 / 81.0, 1.0 / 12.0);
        case 4:
            return std::pow(4900.0 * u / 729.0, 1.0 / 16.0);
        default:
            throw std::invalid_argument("no asymptotic form");
    }
}

double asymptotic_log2_epsilon(double u, unsigned k) {
    if (!(u > 0)) throw std::invalid_argument("u must be positive");
    const double lu = std::log2(u);
    const double l3 = std::log2(3.0);
    switch (k) {
        case 1:
            return (-lu + 1 - l3) / 2.0;
        case 2:
            return (-lu + 2 - 2 * l3) / 8.0;
        case 3:
            return (std::log2(10.0) - 2 * l3) / 6.0;
        case 4:
            return (lu + 2 * std::log2(70.0) - 6 * l3) / 16.0;
        default:
            throw std::invalid_argument("no asymptotic form");
    }
}

double significant_bits(double epsilon) {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    return std::log2(epsilon);
}

}  // namespace rounderr
