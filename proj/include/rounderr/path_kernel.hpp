#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rounderr/scenarios.hpp"

namespace rounderr::sim {

// Flattened, double-precision view of a Scenario for the path kernels: the
// path visits segments in order, each contributing `count` draws scaled by
// `scale`. Exact rationals are only needed on the analytic side; the
// simulator works in binary64 like the programs it models.
struct PathLayout {
    struct Segment {
        double scale;
        std::uint64_t count;
    };
    std::vector<Segment> segments;

    std::uint64_t total_steps() const;
    static PathLayout from_scenario(const Scenario& s);
};

// Exceedance counts and endpoint moments for one block of replications.
// Kernels must update replications in ascending order with plain double
// arithmetic so that every backend produces bit-identical results.
struct ChunkAccum {
    explicit ChunkAccum(std::size_t grid_size)
        : count_max(grid_size, 0), count_end(grid_size, 0) {}

    std::vector<std::uint64_t> count_max;  // replications with max_i |S_i| >= grid[g]
    std::vector<std::uint64_t> count_end;  // replications with |S_n| >= grid[g]
    double sum_end_sq = 0.0;               // sum over replications of S_n^2
    double sum_end_p4 = 0.0;               // ... and S_n^4
    double peak_excursion = 0.0;           // max over replications of max_i |S_i|

    // Fold per-replication results in replication order.
    void update(std::span<const double> grid, double peak, double end_value);
    // Fold chunks in chunk order.
    void merge(const ChunkAccum& other);
};

// Simulates replications [rep_begin, rep_end) of the path and folds them
// into `accum`.
using PathKernelFn = void (*)(const PathLayout& layout, std::uint64_t seed,
                              std::uint64_t rep_begin, std::uint64_t rep_end,
                              std::span<const double> grid, ChunkAccum& accum);

void run_paths_scalar(const PathLayout&, std::uint64_t seed, std::uint64_t rep_begin,
                      std::uint64_t rep_end, std::span<const double> grid, ChunkAccum&);
// AVX2 variant: 8 replications in flight (Philox lanes), otherwise the same
// arithmetic in the same order. Only callable when avx2_supported().
void run_paths_avx2(const PathLayout&, std::uint64_t seed, std::uint64_t rep_begin,
                    std::uint64_t rep_end, std::span<const double> grid, ChunkAccum&);

enum class SimdBackend { kAuto, kScalar, kAvx2 };

bool avx2_supported();
SimdBackend resolve_backend(SimdBackend requested);  // kAuto -> best available; throws if
                                                     // an unsupported backend is forced
PathKernelFn select_path_kernel(SimdBackend requested);
std::string backend_label(SimdBackend resolved);
SimdBackend backend_from_label(const std::string& label);

}  // namespace rounderr::sim
