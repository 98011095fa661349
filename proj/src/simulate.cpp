#include "rounderr/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace rounderr::sim {

namespace {

void check_grid(const std::vector<double>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0) || !std::isfinite(grid[i]))
            throw std::invalid_argument("epsilon grid entries must be positive and finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("epsilon grid must be strictly increasing");
    }
}

}  // namespace

SimReport simulate_paths(const SimConfig& config) {
    if (config.replications < 1) throw std::invalid_argument("need at least one replication");
    if (config.threads < 1) throw std::invalid_argument("need at least one thread");
    if (config.chunk_reps < 1) throw std::invalid_argument("chunk size must be positive");
    check_grid(config.epsilon_grid);

    const PathLayout layout = PathLayout::from_scenario(config.scenario);
    const std::uint64_t steps = layout.total_steps();
    if (steps != 0 && config.replications > config.op_cap / steps)
        throw std::overflow_error(
            "job needs about " + std::to_string(steps) + " steps x " +
            std::to_string(config.replications) + " replications, above the operation cap " +
            std::to_string(config.op_cap));

    const SimdBackend backend = resolve_backend(config.backend);
    const PathKernelFn kernel = select_path_kernel(backend);
    const auto t0 = std::chrono::steady_clock::now();

    const std::uint64_t nchunks =
        (config.replications + config.chunk_reps - 1) / config.chunk_reps;
    std::vector<ChunkAccum> partial(nchunks, ChunkAccum(config.epsilon_grid.size()));

    auto worker = [&](std::atomic<std::uint64_t>& next) {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= nchunks) return;
            const std::uint64_t lo = c * config.chunk_reps;
            const std::uint64_t hi = std::min(lo + config.chunk_reps, config.replications);
            kernel(layout, config.seed, lo, hi, config.epsilon_grid, partial[c]);
        }
    };

    std::atomic<std::uint64_t> next_chunk{0};
    if (config.threads == 1) {
        worker(next_chunk);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(config.threads);
        for (unsigned t = 0; t < config.threads; ++t)
            pool.emplace_back([&] { worker(next_chunk); });
        for (auto& th : pool) th.join();
    }

    // Chunk-ordered fold: results do not depend on which thread ran what.
    ChunkAccum total(config.epsilon_grid.size());
    for (const auto& p : partial) total.merge(p);

    SimReport report;
    report.seed = config.seed;
    report.replications = config.replications;
    report.grid.resize(config.epsilon_grid.size());
    const double R = static_cast<double>(config.replications);
    for (std::size_t g = 0; g < config.epsilon_grid.size(); ++g) {
        GridPoint& pt = report.grid[g];
        pt.epsilon = config.epsilon_grid[g];
        pt.count_max = total.count_max[g];
        pt.count_end = total.count_end[g];
        pt.p_max = static_cast<double>(pt.count_max) / R;
        pt.p_end = static_cast<double>(pt.count_end) / R;
        pt.ci_max = confidence_interval(pt.count_max, config.replications, report.ci_level);
        pt.ci_end = confidence_interval(pt.count_end, config.replications, report.ci_level);
    }
    report.mean_end_sq = total.sum_end_sq / R;
    report.mean_end_p4 = total.sum_end_p4 / R;
    report.peak_excursion = total.peak_excursion;
    report.backend = backend_label(backend);
    report.threads = config.threads;
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

nlohmann::json sim_report_to_json(const SimReport& report, bool include_runtime,
                                  bool include_execution) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& pt : report.grid) {
        grid.push_back({{"epsilon", pt.epsilon},
                        {"count_max", pt.count_max},
                        {"count_end", pt.count_end},
                        {"p_max", pt.p_max},
                        {"p_end", pt.p_end},
                        {"ci_lo", pt.ci_max.lo},
                        {"ci_hi", pt.ci_max.hi},
                        {"ci_end_lo", pt.ci_end.lo},
                        {"ci_end_hi", pt.ci_end.hi}});
    }
    nlohmann::json j{{"seed", report.seed},
                     {"replications", report.replications},
                     {"ci_level", report.ci_level},
                     {"grid", std::move(grid)},
                     {"mean_end_sq", report.mean_end_sq},
                     {"mean_end_p4", report.mean_end_p4},
                     {"peak_excursion", report.peak_excursion}};
    if (include_execution) {
        j["backend"] = report.backend;
        j["threads"] = report.threads;
    }
    if (include_runtime) j["runtime_seconds"] = report.runtime_seconds;
    return j;
}

namespace {

ValidationVerdict validate_against(const SimReport& report,
                                   const std::vector<double>& analytic, bool use_max_event) {
    if (analytic.size() != report.grid.size())
        throw std::invalid_argument("analytic bounds must align with the epsilon grid");
    ValidationVerdict v;
    v.entries.reserve(report.grid.size());
    for (std::size_t g = 0; g < report.grid.size(); ++g) {
        const GridPoint& pt = report.grid[g];
        ValidationEntry e;
        e.epsilon = pt.epsilon;
        e.analytic = analytic[g];
        e.empirical = use_max_event ? pt.p_max : pt.p_end;
        e.ci_lo = use_max_event ? pt.ci_max.lo : pt.ci_end.lo;
        e.pass = e.ci_lo <= e.analytic;
        e.slack = e.empirical > 0 ? e.analytic / e.empirical
                                  : std::numeric_limits<double>::infinity();
        v.pass = v.pass && e.pass;
        v.entries.push_back(e);
    }
    return v;
}

}  // namespace

ValidationVerdict validate_bound(const SimReport& report,
                                 const std::vector<double>& analytic_p_max) {
    return validate_against(report, analytic_p_max, true);
}

ValidationVerdict validate_endpoint_bound(const SimReport& report,
                                          const std::vector<double>& analytic_p_end) {
    return validate_against(report, analytic_p_end, false);
}

nlohmann::json verdict_to_json(const ValidationVerdict& v) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : v.entries) {
        nlohmann::json je{{"epsilon", e.epsilon},
                          {"analytic", e.analytic},
                          {"empirical", e.empirical},
                          {"ci_lo", e.ci_lo},
                          {"pass", e.pass}};
        if (std::isfinite(e.slack)) je["slack"] = e.slack;
        entries.push_back(std::move(je));
    }
    return nlohmann::json{{"pass", v.pass}, {"entries", std::move(entries)}};
}

}  // namespace rounderr::sim
