#include "rounderr/hardware_error.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rounderr/dd_accumulator.hpp"
#include "rounderr/philox.hpp"

namespace rounderr::sim {

HardwareErrorReport hardware_error_paths(const HardwareErrorConfig& config) {
    if (config.n < 1 || config.replications < 1)
        throw std::invalid_argument("n and replications must be positive");
    if (!(config.data_hi >= config.data_lo) || !std::isfinite(config.data_lo) ||
        !std::isfinite(config.data_hi))
        throw std::invalid_argument("bad data range");
    if (config.replications > config.op_cap / config.n)
        throw std::overflow_error("job exceeds the operation cap");

    DdAccumulator sum_z, sum_z2, sum_z4, sum_z6, sum_z8;
    std::uint64_t samples = 0;
    double max_abs = 0;
    double worst_residual = 0;

    for (std::uint64_t rep = 0; rep < config.replications; ++rep) {
        float acc = 0.0f;
        DdAccumulator exact_sum;   // reference accumulator (~106 bits)
        DdAccumulator error_sum;   // sum of the measured per-step errors
        for (std::uint64_t i = 0; i < config.n; ++i) {
            const double d = config.data_hi == config.data_lo
                                 ? config.data_lo
                                 : rng::unit_range(rng::raw_draw(config.seed, rep, i),
                                                   config.data_lo, config.data_hi);
            const float df = static_cast<float>(d);
            // Exact: the sum of two binary32 values fits in binary64.
            const double exact_step = static_cast<double>(acc) + static_cast<double>(df);
            acc = acc + df;  // the measured operation, round-to-nearest binary32
            if (!std::isfinite(acc)) throw std::overflow_error("accumulator overflowed");
            const double err = static_cast<double>(acc) - exact_step;
            exact_sum.add(static_cast<double>(df));
            error_sum.add(err);

            if (acc != 0.0f) {
                const int e = std::ilogb(acc);
                const double u = std::ldexp(1.0, e - 24);  // ulp(acc)/2 for p = 24
                const double z = err / u;
                const double z2 = z * z;
                sum_z.add(z);
                sum_z2.add(z2);
                sum_z4.add(z2 * z2);
                sum_z6.add(z2 * z2 * z2);
                sum_z8.add(z2 * z2 * z2 * z2);
                if (std::fabs(z) > max_abs) max_abs = std::fabs(z);
                ++samples;
            }
        }
        const double residual =
            std::fabs((static_cast<double>(acc) - exact_sum.value()) - error_sum.value());
        if (residual > worst_residual) worst_residual = residual;
    }

    HardwareErrorReport rep;
    rep.samples = samples;
    if (samples > 0) {
        const double N = static_cast<double>(samples);
        rep.mean_over_u = sum_z.value() / N;
        rep.m2_over_u2 = sum_z2.value() / N;
        rep.m4_over_u4 = sum_z4.value() / N;
        rep.m6_over_u6 = sum_z6.value() / N;
        rep.m8_over_u8 = sum_z8.value() / N;
        rep.max_abs_over_u = max_abs;
        const double var = rep.m2_over_u2 - rep.mean_over_u * rep.mean_over_u;
        rep.symmetry_tstat =
            var > 0 ? rep.mean_over_u / std::sqrt(var / N) : 0.0;
    }
    rep.reference_residual = worst_residual;
    return rep;
}

nlohmann::json hardware_report_to_json(const HardwareErrorReport& r) {
    return nlohmann::json{{"samples", r.samples},
                          {"mean_over_u", r.mean_over_u},
                          {"m2_over_u2", r.m2_over_u2},
                          {"m4_over_u4", r.m4_over_u4},
                          {"m6_over_u6", r.m6_over_u6},
                          {"m8_over_u8", r.m8_over_u8},
                          {"max_abs_over_u", r.max_abs_over_u},
                          {"symmetry_tstat", r.symmetry_tstat},
                          {"reference_residual", r.reference_residual}};
}

}  // namespace rounderr::sim
