// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line each. The first argument must be the path to
// the CLI binary (used by the criteria that exercise the command surface).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rounderr/filter.hpp"
#include "rounderr/hardware_error.hpp"
#include "rounderr/moment_series.hpp"
#include "rounderr/scenarios.hpp"
#include "rounderr/simulate.hpp"
#include "rounderr/tail_bounds.hpp"

namespace {

using namespace rounderr;
using nlohmann::json;

int failures = 0;

void report(int number, bool pass, const std::string& what, const std::string& detail = "") {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << what;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string run_cli(const std::string& cli, const std::string& args, int* exit_code = nullptr) {
    const std::string cmd = "'" + cli + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run: " + cmd);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t nread;
    while ((nread = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), nread);
    const int rc = pclose(pipe);
    if (exit_code) *exit_code = WEXITSTATUS(rc);
    return out;
}

// --- criterion 1: reference-table reproduction --------------------------------

struct RefBlock {
    std::uint64_t total;
    double P;
    double eps[4];
    unsigned best_two_k;
    double best_eps;
};

bool criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const RefBlock blocks[] = {
        {2'000'000'000ull, 1e-9, {68.825, 0.42832, 0.085786, 0.040042}, 44, 0.010153},
        {10'000'000'000ull, 1e-10, {486.66, 1.7031, 0.28156, 0.11939}, 48, 0.023873},
    };
    bool ok = true;
    std::ostringstream detail;
    for (const auto& b : blocks) {
        auto series = series_power(series_for_variable(MomentModel::uniform_bounded(pow2(-24)), 32),
                                   b.total);
        for (unsigned k = 1; k <= 4; ++k) {
            const double eps = epsilon_for_probability(series, k, b.P, true);
            ok = ok && std::fabs(eps - b.eps[k - 1]) / b.eps[k - 1] <= 2e-4;
        }
        auto best = optimize_k(series, b.P, true, 24);
        ok = ok && 2 * best.k_used == b.best_two_k;
        ok = ok && std::fabs(best.epsilon - b.best_eps) / b.best_eps <= 2e-4;
        detail << "2k*=" << 2 * best.k_used << " eps=" << best.epsilon << "  ";
    }
    const double dt = seconds_since(t0);
    ok = ok && dt < 5.0;
    detail << "runtime " << dt << "s";
    report(1, ok, "ten reference epsilons within 2e-4, optimal orders 44 and 48, under 5 s",
           detail.str());
    return ok;
}

// --- criterion 2: closed forms equal the series engine exactly ----------------

bool criterion2() {
    const Rational us[] = {Rational(1), Rational(1, 2), pow2(-24)};
    bool ok = true;
    for (const Rational& u : us) {
        auto base = series_for_variable(MomentModel::uniform_bounded(u), 4);
        for (std::uint64_t n = 1; n <= 50 && ok; ++n) {
            auto s = series_power(base, n);
            for (unsigned k = 1; k <= 4; ++k)
                ok = ok && moment_bound(s, k) == closed_form_moment(n, u, k);
        }
    }
    report(2, ok, "closed forms vs series engine, exact equality, n=1..50 x 3 u values x k=1..4");
    return ok;
}

// --- criterion 3: brute-force multinomial oracle ------------------------------

bool criterion3() {
    const Rational us[] = {Rational(1), Rational(1, 2), Rational(1, 3)};
    bool ok = true;
    for (std::size_t n = 1; n <= 6 && ok; ++n) {
        for (std::size_t offset = 0; offset < 3 && ok; ++offset) {
            std::vector<MomentModel> models;
            MomentSeries s = MomentSeries::identity(4);
            for (std::size_t i = 0; i < n; ++i) {
                models.push_back(MomentModel::uniform_bounded(us[(i + offset) % 3]));
                s = series_product(s, series_for_variable(models.back(), 4));
            }
            for (unsigned k = 1; k <= 4; ++k)
                ok = ok && brute_force_moment(models, k) == moment_bound(s, k);
        }
    }
    report(3, ok, "brute-force enumeration equals the series engine, n<=6, k<=4, mixed u");
    return ok;
}

// --- criteria 4 and 5: empirical factor-2 and bound validity ------------------

sim::SimReport shared_sim_report(std::vector<double>& grid) {
    // 20-point geometric grid calibrated so the empirical max-exceedance
    // probability spans roughly 0.9 down to 1e-3 for n = 1e4 uniform +-1.
    grid.clear();
    const double lo = 38.0, hi = 210.0;
    for (int i = 0; i < 20; ++i) grid.push_back(lo * std::pow(hi / lo, i / 19.0));

    sim::SimConfig cfg;
    cfg.seed = 20260809;
    cfg.replications = 100'000;
    cfg.scenario = accumulation_scenario(10'000, 1, Rational(1));
    cfg.epsilon_grid = grid;
    cfg.threads = 4;
    return sim::simulate_paths(cfg);
}

bool criterion4(const sim::SimReport& rep, double runtime) {
    bool ok = runtime < 120.0;
    double span_lo = 1.0, span_hi = 0.0;
    bool factor2 = true;
    for (const auto& pt : rep.grid) {
        span_lo = std::min(span_lo, pt.p_max);
        span_hi = std::max(span_hi, pt.p_max);
        // lower limit of the max event vs twice the upper limit of the endpoint:
        // the factor-2 ordering must survive both confidence margins
        factor2 = factor2 && pt.ci_max.lo <= 2.0 * pt.ci_end.hi;
    }
    ok = ok && factor2;
    const bool spans = span_hi >= 0.85 && span_lo <= 1.2e-3 && span_lo > 0;
    ok = ok && spans;
    std::ostringstream detail;
    detail << "p_max spans [" << span_lo << ", " << span_hi << "], runtime " << runtime << "s";
    report(4, ok, "factor-2 maximal inequality holds empirically across the 20-point grid",
           detail.str());
    return ok;
}

bool criterion5(const sim::SimReport& rep, const std::vector<double>& grid) {
    auto series = scenario_series(accumulation_scenario(10'000, 1, Rational(1)), 4);
    bool ok = true;
    double min_slack = 1e300;
    for (unsigned k = 1; k <= 4; ++k) {
        std::vector<double> bounds;
        for (double eps : grid) bounds.push_back(levy_max_tail(moment_bound(series, k), k, eps));
        auto verdict = sim::validate_bound(rep, bounds);
        ok = ok && verdict.pass;
        for (const auto& e : verdict.entries)
            if (e.empirical > 0) min_slack = std::min(min_slack, e.analytic / e.empirical);
    }
    std::ostringstream detail;
    detail << "min analytic/empirical slack " << min_slack;
    report(5, ok, "analytic bounds dominate the empirical lower confidence limits, k=1..4",
           detail.str());
    return ok;
}

// --- criterion 6: hardware error model ----------------------------------------

bool criterion6() {
    sim::HardwareErrorConfig cfg;
    cfg.n = 1000;
    cfg.replications = 10'000;
    cfg.seed = 1234;
    auto r = sim::hardware_error_paths(cfg);
    const bool mean_ok = std::fabs(r.mean_over_u) < 0.05;
    const bool m2_ok = r.m2_over_u2 <= 0.40;
    std::ostringstream detail;
    detail << "|mean|/u = " << std::fabs(r.mean_over_u) << ", m2/u^2 = " << r.m2_over_u2
           << " (analytic reference 1/3)";
    report(6, mean_ok && m2_ok,
           "binary32 accumulation errors: |mean|/u < 0.05 and m2 <= 0.40 u^2", detail.str());
    return mean_ok && m2_ok;
}

// --- criterion 7: filter analysis ----------------------------------------------

bool criterion7(const std::string& cli) {
    bool ok = true;
    // impulse response against the hand recurrence, 20 terms, exact
    FilterSpec f{0.0, 0.25};
    auto y = impulse_response(f, 19);
    double h2 = 0.0, h1 = 1.0;  // y_{-1}, y_0
    for (int i = 0; i <= 19; ++i) {
        double expect = i == 0 ? 1.0 : -f.b1 * h1 - f.b2 * h2;
        if (i > 0) {
            h2 = h1;
            h1 = expect;
        }
        ok = ok && y[i] == expect;
    }
    const double csum = exact_coefficient_sum(f, 1e-12);
    ok = ok && std::fabs(csum - 4.0 / 3.0) <= 1e-12;
    const double closed_form = bibo_bound(f);
    ok = ok && closed_form == 1.0;
    // both values must appear in the CLI report
    const std::string out =
        run_cli(cli, "filter --b1 0 --b2 0.25 --n 32 --u 2^-24 --P 1e-9 --format json");
    json j = json::parse(out);
    ok = ok && j.at("closed_form_bibo_bound").get<double>() == 1.0;
    ok = ok && std::fabs(j.at("coefficient_sum").get<double>() - 4.0 / 3.0) <= 1e-12;
    std::ostringstream detail;
    detail << "coefficient sum " << csum << ", closed-form bound " << closed_form;
    report(7, ok, "filter (b1=0, b2=1/4): exact impulse terms, sum 4/3 +- 1e-12, bound 1.0",
           detail.str());
    return ok;
}

// --- criterion 8: scope statement ----------------------------------------------

bool criterion8(bool c1, bool c2, bool c3, bool c4, bool c5) {
    const bool ok = c1 && c2 && c3 && c4 && c5;
    report(8, ok,
           "the n=1e9, P=1e-9 regime is not empirically checkable at desk scale "
           "(1e18 path-steps); it is covered by the exact analytic criteria 1-3 "
           "plus the scaled-down empirical criteria 4-5");
    return ok;
}

// --- criterion 9: byte-identical simulation output -----------------------------

bool criterion9(const std::string& cli) {
    const std::string base =
        "simulate --n 2000 --m 1 --u 1 --seed 99 --reps 20000 --eps 30 60 120 --format json";
    int rc1 = 0, rc2 = 0, rc3 = 0, rc4 = 0;
    const std::string a = run_cli(cli, base + " --threads 1", &rc1);
    const std::string b = run_cli(cli, base + " --threads 1", &rc2);
    const std::string c = run_cli(cli, base + " --threads 3", &rc3);
    const std::string d = run_cli(cli, base + " --threads 2 --backend scalar", &rc4);
    bool ok = !a.empty() && a == b && a == c && a == d;
    ok = ok && rc1 == 0 && rc2 == 0 && rc3 == 0 && rc4 == 0;
    report(9, ok, "repeated and multi-worker runs produce byte-identical JSON",
           "bytes " + std::to_string(a.size()));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli-binary>\n";
        return 2;
    }
    const std::string cli = argv[1];

    const bool c1 = criterion1();
    const bool c2 = criterion2();
    const bool c3 = criterion3();

    std::vector<double> grid;
    const auto t0 = std::chrono::steady_clock::now();
    sim::SimReport rep = shared_sim_report(grid);
    const double sim_runtime = seconds_since(t0);
    const bool c4 = criterion4(rep, sim_runtime);
    const bool c5 = criterion5(rep, grid);

    const bool c6 = criterion6();
    const bool c7 = criterion7(cli);
    criterion8(c1, c2, c3, c4, c5);
    criterion9(cli);

    (void)c6;
    (void)c7;
    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: ")
              << (failures == 0 ? "" : std::to_string(failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
