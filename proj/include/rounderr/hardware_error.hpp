#pragma once

#include <cstdint>

#include <nlohmann/json_fwd.hpp>

namespace rounderr::sim {

// Measures real binary32 rounding errors: runs the plain accumulation loop
// a_i = a_{i-1} + d_i in float, with d_i drawn from a uniform range, and
// compares each step against the exact sum (representable in binary64 for
// float operands). Errors are normalized by u = ulp(a_i)/2 at the exponent
// of the rounded result.
struct HardwareErrorConfig {
    std::uint64_t n = 1000;           // accumulation length
    std::uint64_t replications = 1;
    std::uint64_t seed = 0;
    double data_lo = 1.0;             // d_i uniform in [data_lo, data_hi);
    double data_hi = 2.0;             // equal bounds mean constant data
    std::uint64_t op_cap = 40'000'000'000ull;
};

struct HardwareErrorReport {
    std::uint64_t samples = 0;        // steps with a defined normalizer
    double mean_over_u = 0;           // sample mean of X_i/u_i
    double m2_over_u2 = 0;            // even sample moments of X_i/u_i
    double m4_over_u4 = 0;
    double m6_over_u6 = 0;
    double m8_over_u8 = 0;
    double max_abs_over_u = 0;
    double symmetry_tstat = 0;        // mean / (stddev/sqrt(samples))
    // |(a_n - exact running sum) - sum of measured X_i|, accumulated in
    // double-double; should sit at that accumulator's noise floor.
    double reference_residual = 0;
};

HardwareErrorReport hardware_error_paths(const HardwareErrorConfig& config);

nlohmann::json hardware_report_to_json(const HardwareErrorReport& report);

}  // namespace rounderr::sim
