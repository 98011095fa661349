// Reference path kernel. Compiled with -ffp-contract=off: the SIMD variants
// replay exactly this sequence of IEEE operations, and fused multiply-adds
// would silently change the roundings.

#include <cmath>

#include "rounderr/path_kernel.hpp"
#include "rounderr/philox.hpp"

namespace rounderr::sim {

void run_paths_scalar(const PathLayout& layout, std::uint64_t seed, std::uint64_t rep_begin,
                      std::uint64_t rep_end, std::span<const double> grid, ChunkAccum& accum) {
    for (std::uint64_t rep = rep_begin; rep < rep_end; ++rep) {
        double sum = 0.0;
        double peak = 0.0;
        std::uint64_t draw = 0;
        double cached = 0.0;  // second word of the current Philox block
        for (const auto& seg : layout.segments) {
            for (std::uint64_t i = 0; i < seg.count; ++i) {
                double x;
                if ((draw & 1) == 0) {
                    const auto words = rng::draw_pair(seed, rep, draw >> 1);
                    x = rng::signed_unit(words[0]);
                    cached = rng::signed_unit(words[1]);
                } else {
                    x = cached;
                }
                ++draw;
                sum += seg.scale * x;
                const double a = std::fabs(sum);
                if (a > peak) peak = a;
            }
        }
        accum.update(grid, peak, sum);
    }
}

}  // namespace rounderr::sim
