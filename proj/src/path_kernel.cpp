#include "rounderr/path_kernel.hpp"

#include <stdexcept>

namespace rounderr::sim {

std::uint64_t PathLayout::total_steps() const {
    std::uint64_t total = 0;
    for (const auto& seg : segments) {
        if (seg.count > UINT64_MAX - total) throw std::overflow_error("path length overflow");
        total += seg.count;
    }
    return total;
}

PathLayout PathLayout::from_scenario(const Scenario& s) {
    PathLayout layout;
    layout.segments.reserve(s.groups.size());
    for (const auto& g : s.groups)
        layout.segments.push_back({to_double(g.model.half_width()), g.count});
    return layout;
}

void ChunkAccum::update(std::span<const double> grid, double peak, double end_value) {
    const double end_abs = end_value < 0 ? -end_value : end_value;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (peak >= grid[g]) ++count_max[g];
        // the endpoint event implies the max event
        if (end_abs >= grid[g]) ++count_end[g];
    }
    const double sq = end_value * end_value;
    sum_end_sq += sq;
    sum_end_p4 += sq * sq;
    if (peak > peak_excursion) peak_excursion = peak;
}

void ChunkAccum::merge(const ChunkAccum& other) {
    for (std::size_t g = 0; g < count_max.size(); ++g) {
        count_max[g] += other.count_max[g];
        count_end[g] += other.count_end[g];
    }
    sum_end_sq += other.sum_end_sq;
    sum_end_p4 += other.sum_end_p4;
    if (other.peak_excursion > peak_excursion) peak_excursion = other.peak_excursion;
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

SimdBackend resolve_backend(SimdBackend requested) {
    switch (requested) {
        case SimdBackend::kAuto:
            return avx2_supported() ? SimdBackend::kAvx2 : SimdBackend::kScalar;
        case SimdBackend::kScalar:
            return SimdBackend::kScalar;
        case SimdBackend::kAvx2:
            if (!avx2_supported()) throw std::runtime_error("AVX2 not available on this CPU");
            return SimdBackend::kAvx2;
    }
    throw std::logic_error("unreachable");
}

PathKernelFn select_path_kernel(SimdBackend requested) {
    return resolve_backend(requested) == SimdBackend::kAvx2 ? run_paths_avx2 : run_paths_scalar;
}

std::string backend_label(SimdBackend resolved) {
    switch (resolved) {
        case SimdBackend::kAuto: return "auto";
        case SimdBackend::kScalar: return "scalar";
        case SimdBackend::kAvx2: return "avx2";
    }
    return "?";
}

SimdBackend backend_from_label(const std::string& label) {
    if (label == "auto") return SimdBackend::kAuto;
    if (label == "scalar") return SimdBackend::kScalar;
    if (label == "avx2") return SimdBackend::kAvx2;
    throw std::invalid_argument("unknown backend: " + label);
}

}  // namespace rounderr::sim
