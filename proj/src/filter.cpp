#include "rounderr/filter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rounderr/dd_accumulator.hpp"

namespace rounderr {

void FilterSpec::validate() const {
    if (!(b2 > 0)) throw std::domain_error("b2 must be positive");
    if (!(b1 * b1 < 4.0 * b2))
        throw std::domain_error(
            "characteristic roots are real (b1^2 >= 4*b2); outside the supported filter class");
}

std::vector<double> impulse_response(const FilterSpec& f, std::size_t n) {
    f.validate();
    std::vector<double> y(n + 1);
    y[0] = 1.0;
    if (n >= 1) y[1] = -f.b1;
    for (std::size_t i = 2; i <= n; ++i) y[i] = -f.b1 * y[i - 1] - f.b2 * y[i - 2];
    return y;
}

std::vector<Rational> impulse_response_exact(const Rational& b1, const Rational& b2,
                                             std::size_t n) {
    std::vector<Rational> y(n + 1);
    y[0] = 1;
    if (n >= 1) y[1] = -b1;
    for (std::size_t i = 2; i <= n; ++i) y[i] = -b1 * y[i - 1] - b2 * y[i - 2];
    return y;
}

double bibo_bound(const FilterSpec& f) {
    f.validate();
    if (!f.stable())
        throw std::domain_error("filter not BIBO stable; worst case unbounded");
    return std::sqrt(f.b2 + 2.0 * f.b1 * f.b1) / (1.0 - std::sqrt(f.b2));
}

double envelope_constant(const FilterSpec& f) {
    f.validate();
    // y_n = r^n (cos(n w) + beta sin(n w)) with r = sqrt(b2); the amplitude is
    // sqrt(1 + beta^2) with beta = -b1/sqrt(4 b2 - b1^2).
    return 2.0 * std::sqrt(f.b2) / std::sqrt(4.0 * f.b2 - f.b1 * f.b1);
}

double exact_coefficient_sum(const FilterSpec& f, double tol) {
    f.validate();
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    if (!f.stable()) throw std::domain_error("filter not BIBO stable; coefficient sum diverges");

    const double r = std::sqrt(f.b2);
    const double c = envelope_constant(f);
    // Terms needed before the tail bound c*r^N/(1-r) falls below tol/2.
    constexpr double kMaxTerms = 2e8;
    const double target = tol * 0.5 * (1.0 - r) / c;
    std::size_t nterms = 1;
    if (target < 1.0) {
        double est = std::ceil(std::log(target) / std::log(r)) + 1.0;
        if (!(est <= kMaxTerms))
            throw std::runtime_error("tolerance unreachable within the term cap");
        if (est > 1.0) nterms = static_cast<std::size_t>(est);
    }

    DdAccumulator sum;
    double prev2 = 0.0;
    double prev1 = 0.0;
    for (std::size_t i = 0; i < nterms; ++i) {
        double y = i == 0 ? 1.0 : -f.b1 * prev1 - f.b2 * prev2;
        prev2 = prev1;
        prev1 = y;
        sum.add(std::fabs(y));
    }
    const double tail = c * std::pow(r, static_cast<double>(nterms)) / (1.0 - r);
    return sum.value() + tail * 0.5;
}

Scenario scenario_from_weights(std::span<const double> weights, const Rational& u,
                               std::uint64_t m, unsigned buckets,
                               const std::string& description) {
    if (sgn(u) <= 0) throw std::invalid_argument("u must be positive");
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (buckets < 1) throw std::invalid_argument("need at least one bucket");

    std::vector<double> mags;
    mags.reserve(weights.size());
    for (double w : weights) {
        if (!std::isfinite(w)) throw std::invalid_argument("non-finite weight");
        if (w != 0.0) mags.push_back(std::fabs(w));
    }
    Scenario s;
    s.description = description;
    if (mags.empty()) {
        s.degenerate = true;
        return s;
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());

    // Multiplicity per distinct magnitude, largest first.
    std::vector<std::pair<double, std::uint64_t>> distinct;
    for (double w : mags) {
        if (!distinct.empty() && distinct.back().first == w)
            distinct.back().second += 1;
        else
            distinct.emplace_back(w, 1);
    }

    std::vector<std::pair<double, std::uint64_t>> grouped;
    if (distinct.size() <= buckets) {
        grouped = std::move(distinct);
    } else {
        // Geometric bucket edges from wmax down to wmin; each weight rounds UP
        // to the smallest edge that still dominates it. Doubling `buckets`
        // refines the edge set in place, so refinement never loosens the bound.
        const double wmax = distinct.front().first;
        const double wmin = distinct.back().first;
        const double span = std::log(wmax / wmin);
        auto edge_at = [&](unsigned t) {
            return t == 0 ? wmax : wmax * std::pow(wmin / wmax, static_cast<double>(t) / buckets);
        };
        std::map<unsigned, std::uint64_t> by_bucket;
        for (const auto& [w, count] : distinct) {
            unsigned t = 0;
            if (span > 0) {
                t = static_cast<unsigned>(std::floor(std::log(wmax / w) / span * buckets));
                if (t >= buckets) t = buckets - 1;
                while (t > 0 && edge_at(t) < w) --t;
                while (t + 1 < buckets && edge_at(t + 1) >= w) ++t;
            }
            by_bucket[t] += count;
        }
        for (const auto& [t, count] : by_bucket) grouped.emplace_back(edge_at(t), count);
    }

    for (const auto& [w, count] : grouped) {
        if (m != 0 && count > UINT64_MAX / m) throw std::overflow_error("n*m exceeds 64 bits");
        ErrorVariableSpec g{MomentModel::uniform_bounded(u * rational_from_double(w)),
                            count * m, "weight " + std::to_string(w)};
        s.groups.push_back(std::move(g));
    }
    return s;
}

Scenario filter_error_scenario(const FilterSpec& f, std::uint64_t n, const Rational& u,
                               std::uint64_t m, unsigned buckets) {
    f.validate();
    if (n < 1) throw std::invalid_argument("horizon n must be positive");
    if (n > (1u << 26))
        throw std::invalid_argument("horizon too large for explicit weight expansion");
    std::vector<double> y = impulse_response(f, static_cast<std::size_t>(n - 1));
    return scenario_from_weights(y, u, m, buckets,
                                 "filter error at horizon " + std::to_string(n));
}

}  // namespace rounderr
