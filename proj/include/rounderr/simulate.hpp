#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rounderr/path_kernel.hpp"
#include "rounderr/scenarios.hpp"

namespace rounderr::sim {

// Exact two-sided Clopper-Pearson interval for a binomial proportion.
struct Interval {
    double lo = 0;
    double hi = 1;
};
Interval confidence_interval(std::uint64_t successes, std::uint64_t trials, double level);

inline constexpr std::uint64_t kDefaultOpCap = 40'000'000'000ull;

struct SimConfig {
    std::uint64_t seed = 0;
    std::uint64_t replications = 1;
    Scenario scenario;
    std::vector<double> epsilon_grid;  // strictly increasing, positive
    SimdBackend backend = SimdBackend::kAuto;
    unsigned threads = 1;
    std::uint64_t op_cap = kDefaultOpCap;    // refuse jobs above replications * path length
    std::uint64_t chunk_reps = 1024;         // scheduling quantum; result-invariant
};

struct GridPoint {
    double epsilon = 0;
    std::uint64_t count_max = 0;
    std::uint64_t count_end = 0;
    double p_max = 0;
    double p_end = 0;
    Interval ci_max;  // 99%-level by default (see SimReport::ci_level)
    Interval ci_end;
};

struct SimReport {
    std::uint64_t seed = 0;
    std::uint64_t replications = 0;
    double ci_level = 0.99;
    std::vector<GridPoint> grid;
    double mean_end_sq = 0;   // sample mean of S_n^2
    double mean_end_p4 = 0;   // sample mean of S_n^4
    double peak_excursion = 0;
    std::string backend;
    unsigned threads = 1;
    double runtime_seconds = 0;
};

// Deterministic given (seed, scenario, grid): counts are identical across
// thread counts and backends. Streams one pass per replication; nothing is
// stored per path.
SimReport simulate_paths(const SimConfig& config);

// runtime_seconds varies run to run, and backend/thread labels vary with the
// execution environment; machine outputs that must be byte-reproducible omit
// all of them (the counts themselves are invariant to those knobs).
nlohmann::json sim_report_to_json(const SimReport& report, bool include_runtime = true,
                                  bool include_execution = true);

struct ValidationEntry {
    double epsilon = 0;
    double analytic = 0;   // probability bound being validated
    double empirical = 0;  // observed exceedance frequency
    double ci_lo = 0;      // lower confidence limit of the empirical frequency
    bool pass = false;     // ci_lo <= analytic
    double slack = 0;      // analytic / empirical (inf when no exceedance seen)
};

struct ValidationVerdict {
    bool pass = true;
    std::vector<ValidationEntry> entries;
};

// Checks the max-excursion frequencies against analytic bounds, grid-aligned.
// A FAIL is a defect, not noise: the confidence margin is already accounted.
ValidationVerdict validate_bound(const SimReport& report,
                                 const std::vector<double>& analytic_p_max);
// Same check against the endpoint frequencies (used for weighted scenarios
// where only the fixed-horizon bound applies).
ValidationVerdict validate_endpoint_bound(const SimReport& report,
                                          const std::vector<double>& analytic_p_end);

nlohmann::json verdict_to_json(const ValidationVerdict& v);

}  // namespace rounderr::sim
