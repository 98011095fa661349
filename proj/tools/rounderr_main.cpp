// Command-line surface: probabilistic bounds on accumulated round-off error
// (epsilon/probability queries, reference-table reproduction, filter
// analysis, seeded Monte Carlo validation, hardware error measurement).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "rounderr/filter.hpp"
#include "rounderr/hardware_error.hpp"
#include "rounderr/moment_series.hpp"
#include "rounderr/scenarios.hpp"
#include "rounderr/simulate.hpp"
#include "rounderr/tail_bounds.hpp"

namespace {

using namespace rounderr;
using nlohmann::json;

// Exit codes (documented in the README):
//   0 success / all validations passed     1 usage or parameter error
//   2 outside the framework's hypotheses   3 a validation or verdict failed
//   4 resource cap exceeded                5 internal error
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDomain = 2,
    kVerdictFail = 3,
    kResource = 4,
    kInternal = 5,
};

struct OutputOptions {
    std::string format = "table";  // table | json | csv
    int digits = 5;
};

std::string fmt_g(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

// "1.2345e-56" from a base-10 log, usable far beyond binary64 range.
std::string sci_from_log10(double l10, int digits) {
    if (std::isinf(l10) && l10 < 0) return "0";
    double e = std::floor(l10);
    double mant = std::pow(10.0, l10 - e);
    if (mant >= 10.0 - 0.5 * std::pow(10.0, 2 - digits)) {
        mant /= 10.0;
        e += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*fe%+03d", digits - 1, mant, static_cast<int>(e));
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void print_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        std::cout << (i ? "," : "") << csv_field(header[i]);
    std::cout << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            std::cout << (i ? "," : "") << csv_field(row[i]);
        std::cout << "\n";
    }
}

void print_table(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            std::cout << (i ? "  " : "") << cells[i]
                      << std::string(width[i] - cells[i].size(), ' ');
        std::cout << "\n";
    };
    line(header);
    std::size_t total = 0;
    for (std::size_t w : width) total += w + 2;
    std::cout << std::string(total > 2 ? total - 2 : total, '-') << "\n";
    for (const auto& row : rows) line(row);
}

void emit(const OutputOptions& out, const json& j,
          const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& rows) {
    if (out.format == "json")
        std::cout << j.dump(2) << "\n";
    else if (out.format == "csv")
        print_csv(header, rows);
    else
        print_table(header, rows);
}

// Key-value rendering for scalar results.
void emit_kv(const OutputOptions& out, const json& j) {
    if (out.format == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::vector<std::string> header{"field", "value"};
    std::vector<std::vector<std::string>> rows;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_string())
            rows.push_back({it.key(), it->get<std::string>()});
        else if (it->is_array()) {
            std::string joined;
            for (const auto& v : *it) {
                if (!joined.empty()) joined += "; ";
                joined += v.is_string() ? v.get<std::string>() : v.dump();
            }
            rows.push_back({it.key(), joined});
        } else
            rows.push_back({it.key(), it->dump()});
    }
    if (out.format == "csv")
        print_csv(header, rows);
    else
        print_table(header, rows);
}

struct HypothesisFlags {
    bool nonsymmetric = false;
    bool dependent = false;
    bool second_order = false;
};

void add_hypothesis_flags(CLI::App* cmd, HypothesisFlags& f) {
    cmd->add_flag("--nonsymmetric", f.nonsymmetric,
                  "declare the errors non-symmetric (request will be refused)");
    cmd->add_flag("--dependent", f.dependent,
                  "declare the errors dependent (request will be refused)");
    cmd->add_flag("--second-order", f.second_order,
                  "errors enter quadratically, e.g. sums of squares (refused)");
}

void check_hypotheses(const HypothesisFlags& f) {
    if (f.nonsymmetric)
        throw std::domain_error(
            "refused: the bounds assume symmetric error variables (all odd moments vanish); "
            "the max-excursion factor is proved only for symmetric summands");
    if (f.dependent)
        throw std::domain_error(
            "refused: the bounds assume independent errors; dependence breaks the moment "
            "product rule and can only worsen the true error");
    if (f.second_order)
        throw std::domain_error(
            "refused: squared error terms (sums of squares, higher-order expansions) are not "
            "symmetric, so the max-excursion inequality does not apply; a sub-martingale "
            "analysis would be needed and is out of scope");
}

struct AccumulationArgs {
    std::string n_text;
    std::string m_text = "1";
    std::string u_text;
};

void add_accumulation_args(CLI::App* cmd, AccumulationArgs& a) {
    cmd->add_option("--n", a.n_text, "iteration count (exact integer, e.g. 1e9)")->required();
    cmd->add_option("--m", a.m_text, "error variables per iteration (default 1)");
    cmd->add_option("--u", a.u_text,
                    "error half-width: '2^-24', 'num/den', or exact decimal")
        ->required();
}

json assumptions_json(const Rational& u, bool levy) {
    json a = json::array();
    a.push_back("errors are independent");
    a.push_back("errors are symmetric: all odd moments vanish");
    a.push_back("even moments bounded by E(X^(2j)) <= u^(2j)/(2j+1), u = " + to_string(u));
    a.push_back(levy ? "bound covers the running maximum of |S_i| (factor-2 maximal inequality)"
                     : "bound covers |S_n| at the endpoint only");
    return a;
}

// ---------------------------------------------------------------------------
// epsilon: smallest certified error threshold at failure probability P
// ---------------------------------------------------------------------------

int cmd_epsilon(const AccumulationArgs& acc, double P, unsigned k_fixed, unsigned k_max,
                bool no_levy, const HypothesisFlags& hyp, const OutputOptions& out) {
    check_hypotheses(hyp);
    const std::uint64_t n = parse_count(acc.n_text);
    const std::uint64_t m = parse_count(acc.m_text);
    const Rational u = parse_rational(acc.u_text);
    Scenario scenario = accumulation_scenario(n, m, u);
    const unsigned order = std::max(32u, std::max(k_max, k_fixed));
    MomentSeries series = scenario_series(scenario, order);

    TailBoundResult r = k_fixed > 0 ? tail_for_probability(series, k_fixed, P, !no_levy)
                                    : optimize_k(series, P, !no_levy, k_max);

    json j{{"epsilon", r.epsilon},
           {"epsilon_str", fmt_g(r.epsilon, out.digits)},
           {"log2_epsilon", significant_bits(r.epsilon)},
           {"two_k", 2 * r.k_used},
           {"moment_bound", sci_from_log10(r.log10_moment, out.digits)},
           {"log10_moment", r.log10_moment},
           {"P", P},
           {"n", n},
           {"m", m},
           {"u", to_string(u)},
           {"total_variables", scenario.total_count()},
           {"levy_factor_applied", r.levy_factor_applied},
           {"assumptions", assumptions_json(u, r.levy_factor_applied)}};
    emit_kv(out, j);
    return kOk;
}

// ---------------------------------------------------------------------------
// prob: best probability bound at a fixed epsilon
// ---------------------------------------------------------------------------

int cmd_prob(const AccumulationArgs& acc, double epsilon, unsigned k_fixed, unsigned k_max,
             bool no_levy, const HypothesisFlags& hyp, const OutputOptions& out) {
    check_hypotheses(hyp);
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    const std::uint64_t n = parse_count(acc.n_text);
    const std::uint64_t m = parse_count(acc.m_text);
    const Rational u = parse_rational(acc.u_text);
    Scenario scenario = accumulation_scenario(n, m, u);
    const unsigned order = std::max(32u, std::max(k_max, k_fixed));
    MomentSeries series = scenario_series(scenario, order);

    json j{{"epsilon", epsilon},
           {"n", n},
           {"m", m},
           {"u", to_string(u)},
           {"levy_factor_applied", !no_levy},
           {"assumptions", assumptions_json(u, !no_levy)}};

    // |S| can never exceed the sum of the half-widths.
    if (rational_from_double(epsilon) > scenario.support_bound()) {
        j["probability"] = 0.0;
        j["log10_probability"] = nullptr;
        j["note"] = "epsilon exceeds the deterministic maximum total error " +
                    to_string(scenario.support_bound()) + "; the event is impossible";
        emit_kv(out, j);
        return kOk;
    }

    TailBoundResult r = k_fixed > 0 ? tail_for_epsilon(series, k_fixed, epsilon, !no_levy)
                                    : optimize_k_for_epsilon(series, epsilon, !no_levy, k_max);
    j["two_k"] = 2 * r.k_used;
    j["probability"] = r.probability;
    j["log10_probability"] = r.log10_probability;
    j["probability_str"] = r.probability >= 1e-300
                               ? fmt_g(r.probability, out.digits)
                               : "10^" + fmt_g(r.log10_probability, out.digits);
    j["moment_bound"] = sci_from_log10(r.log10_moment, out.digits);
    emit_kv(out, j);
    return kOk;
}

// ---------------------------------------------------------------------------
// moments: table of E(S^{2k}) bounds with closed-form cross-checks
// ---------------------------------------------------------------------------

int cmd_moments(const AccumulationArgs& acc, unsigned k_max, const OutputOptions& out) {
    const std::uint64_t n = parse_count(acc.n_text);
    const std::uint64_t m = parse_count(acc.m_text);
    const Rational u = parse_rational(acc.u_text);
    if (m != 0 && n > UINT64_MAX / m) throw std::overflow_error("n*m exceeds 64 bits");
    const std::uint64_t total = n * m;
    const unsigned order = std::max(k_max, 1u);
    MomentSeries series =
        series_power(series_for_variable(MomentModel::uniform_bounded(u), order), total);

    json rows_json = json::array();
    std::vector<std::vector<std::string>> rows;
    bool all_match = true;
    for (unsigned k = 1; k <= k_max; ++k) {
        Rational mb = moment_bound(series, k);
        const double l10 = sgn(mb) == 0 ? -INFINITY : log10_rational(mb);
        json row{{"two_k", 2 * k},
                 {"bound", sci_from_log10(l10, out.digits)},
                 {"log10_bound", l10}};
        std::string closed_str = "-", match_str = "-";
        if (k <= 4) {
            Rational cf = closed_form_moment(total, u, k);
            const bool match = cf == mb;
            all_match = all_match && match;
            row["closed_form"] = sci_from_log10(log10_rational(cf), out.digits);
            row["match"] = match;
            closed_str = row["closed_form"].get<std::string>();
            match_str = match ? "exact" : "MISMATCH";
        }
        rows_json.push_back(row);
        rows.push_back({std::to_string(2 * k), row["bound"].get<std::string>(),
                        fmt_g(l10, out.digits), closed_str, match_str});
    }
    json j{{"n", n}, {"m", m}, {"u", to_string(u)}, {"total_variables", total},
           {"rows", rows_json}, {"closed_forms_match", all_match}};
    if (out.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        emit(out, j, {"2k", "E(S^2k) bound", "log10", "closed form", "check"}, rows);
    return all_match ? kOk : kVerdictFail;
}

// ---------------------------------------------------------------------------
// table1: reproduce the published reference table
// ---------------------------------------------------------------------------

struct ReferenceBlock {
    std::uint64_t n;
    std::uint64_t m;
    double P;
    double eps[4];  // reference epsilons for 2k = 2, 4, 6, 8
    unsigned best_two_k;
    double best_eps;
};

constexpr ReferenceBlock kReferenceBlocks[] = {
    {1'000'000'000ull, 2, 1e-9, {68.825, 0.42832, 0.085786, 0.040042}, 44, 0.010153},
    {1'000'000'000ull, 10, 1e-10, {486.66, 1.7031, 0.28156, 0.11939}, 48, 0.023873},
};

int cmd_table1(const OutputOptions& out) {
    const Rational u = pow2(-24);
    const unsigned k_search = 24;
    constexpr double kRelTol = 2e-4;

    json blocks = json::array();
    std::vector<std::vector<std::string>> rows;
    bool ok = true;

    for (const ReferenceBlock& ref : kReferenceBlocks) {
        Scenario scenario = accumulation_scenario(ref.n, ref.m, u);
        MomentSeries series = scenario_series(scenario, 32);
        json rows_json = json::array();

        auto add_row = [&](unsigned two_k, double eps, double ref_eps) {
            const double dev = std::fabs(eps - ref_eps) / ref_eps;
            ok = ok && dev <= kRelTol;
            rows_json.push_back({{"two_k", two_k},
                                 {"epsilon", eps},
                                 {"reference", ref_eps},
                                 {"rel_dev", dev},
                                 {"log2_epsilon", significant_bits(eps)}});
            rows.push_back({"2^-24", std::to_string(ref.n), std::to_string(ref.m),
                            fmt_g(ref.P, 3), std::to_string(two_k), fmt_g(eps, out.digits),
                            fmt_g(ref_eps, out.digits), fmt_g(dev, 2),
                            fmt_g(significant_bits(eps), 3)});
        };

        for (unsigned k = 1; k <= 4; ++k)
            add_row(2 * k, epsilon_for_probability(series, k, ref.P, true), ref.eps[k - 1]);
        TailBoundResult best = optimize_k(series, ref.P, true, k_search);
        ok = ok && 2 * best.k_used == ref.best_two_k;
        add_row(2 * best.k_used, best.epsilon, ref.best_eps);

        blocks.push_back({{"n", ref.n},
                          {"m", ref.m},
                          {"P", ref.P},
                          {"optimal_two_k", 2 * best.k_used},
                          {"reference_optimal_two_k", ref.best_two_k},
                          {"rows", std::move(rows_json)}});
    }

    // Asymptotic family n = u^{-3/2}, m = 1, P = u^{3/2}, leading order.
    static const char* kFormula[] = {"(4 u^-2 / 9)^(1/4)", "(4 u^-1 / 9)^(1/8)",
                                     "(100/81)^(1/12)", "(4900 u / 729)^(1/16)"};
    static const char* kLog2Formula[] = {
        "(-log2 u + 1 - log2 3)/2", "(-log2 u + 2 - 2 log2 3)/8",
        "(log2 10 - 2 log2 3)/6", "(log2 u + 2 log2 70 - 6 log2 3)/16"};
    const double u_num = std::ldexp(1.0, -24);
    json asym = json::array();
    for (unsigned k = 1; k <= 4; ++k) {
        const double eps = asymptotic_epsilon(u_num, k);
        const double l2 = asymptotic_log2_epsilon(u_num, k);
        ok = ok && std::fabs(std::log2(eps) - l2) < 1e-9;
        asym.push_back({{"two_k", 2 * k},
                        {"epsilon_formula", kFormula[k - 1]},
                        {"log2_formula", kLog2Formula[k - 1]},
                        {"epsilon_at_2^-24", eps},
                        {"log2_at_2^-24", l2}});
        rows.push_back({"u", "u^-3/2", "1", "u^3/2", std::to_string(2 * k),
                        std::string(kFormula[k - 1]) + " = " + fmt_g(eps, out.digits),
                        "-", "-", fmt_g(l2, out.digits)});
    }

    json j{{"blocks", std::move(blocks)},
           {"asymptotic", std::move(asym)},
           {"rel_tolerance", kRelTol},
           {"all_match", ok}};
    if (out.format == "json")
        std::cout << j.dump(2) << "\n";
    else {
        emit(out, j, {"u", "n", "m", "P", "2k", "epsilon", "reference", "rel dev", "log2 eps"},
             rows);
        if (out.format == "table")
            std::cout << (ok ? "\nall entries match the reference within 2e-4\n"
                             : "\nMISMATCH against the reference table\n");
    }
    return ok ? kOk : kVerdictFail;
}

// ---------------------------------------------------------------------------
// filter: stability, coefficient sums, fixed-horizon probabilistic bound
// ---------------------------------------------------------------------------

int cmd_filter(double b1, double b2, const std::string& n_text, const std::string& u_text,
               const std::string& m_text, double P, unsigned k_max, unsigned buckets,
               double tol, bool levy_max, const OutputOptions& out) {
    FilterSpec f{b1, b2};
    f.validate();
    const std::uint64_t n = parse_count(n_text);
    const std::uint64_t m = parse_count(m_text);
    const Rational u = parse_rational(u_text);

    json j{{"b1", b1},
           {"b2", b2},
           {"stable", f.stable()},
           {"root_modulus", std::sqrt(b2)},
           {"envelope_constant", envelope_constant(f)},
           {"horizon", n},
           {"u", to_string(u)},
           {"m", m}};
    if (f.stable()) {
        j["closed_form_bibo_bound"] = bibo_bound(f);
        j["coefficient_sum"] = exact_coefficient_sum(f, tol);
        j["coefficient_sum_tol"] = tol;
    } else {
        j["closed_form_bibo_bound"] = nullptr;
        j["coefficient_sum"] = nullptr;
        j["note"] = "not BIBO stable: worst-case analysis impossible; the probabilistic "
                    "fixed-horizon bound below still applies";
    }

    Scenario scenario = filter_error_scenario(f, n, u, m, buckets);
    j["weight_groups"] = scenario.groups.size();
    j["degenerate"] = scenario.degenerate;
    if (scenario.degenerate) {
        j["epsilon"] = 0.0;
        emit_kv(out, j);
        return kOk;
    }
    const unsigned order = std::max(32u, k_max);
    MomentSeries series = scenario_series(scenario, order);
    TailBoundResult r = optimize_k(series, P, levy_max, k_max);
    j["P"] = P;
    j["epsilon"] = r.epsilon;
    j["epsilon_str"] = fmt_g(r.epsilon, out.digits);
    j["log2_epsilon"] = significant_bits(r.epsilon);
    j["two_k"] = 2 * r.k_used;
    j["levy_factor_applied"] = r.levy_factor_applied;
    j["event"] = levy_max ? "running maximum over time via the factor-2 maximal inequality "
                            "(opt-in: reweighted partial sums are outside its proved scope)"
                          : "error at the chosen horizon n only (no max-over-time factor)";
    emit_kv(out, j);
    return kOk;
}

// ---------------------------------------------------------------------------
// simulate: seeded Monte Carlo + validation against the analytic bounds
// ---------------------------------------------------------------------------

int cmd_simulate(const AccumulationArgs& acc, std::optional<double> b1, std::optional<double> b2,
                 std::uint64_t seed, const std::string& reps_text, std::vector<double> grid,
                 unsigned threads, const std::string& backend, std::uint64_t cap,
                 std::uint64_t chunk, unsigned buckets, unsigned k_max, bool levy_max,
                 const OutputOptions& out) {
    const std::uint64_t n = parse_count(acc.n_text);
    const std::uint64_t m = parse_count(acc.m_text);
    const Rational u = parse_rational(acc.u_text);
    const bool is_filter = b1.has_value() || b2.has_value();
    if (is_filter && (!b1 || !b2))
        throw std::invalid_argument("filter simulation needs both --b1 and --b2");

    sim::SimConfig cfg;
    cfg.seed = seed;
    cfg.replications = parse_count(reps_text);
    if (cfg.replications == 0) throw std::invalid_argument("need at least one replication");
    cfg.scenario = is_filter ? filter_error_scenario(FilterSpec{*b1, *b2}, n, u, m, buckets)
                             : accumulation_scenario(n, m, u);
    std::sort(grid.begin(), grid.end());
    cfg.epsilon_grid = std::move(grid);
    cfg.backend = sim::backend_from_label(backend);
    cfg.threads = threads;
    cfg.op_cap = cap;
    cfg.chunk_reps = chunk;

    sim::SimReport report = sim::simulate_paths(cfg);

    // analytic bound per grid point: best order up to k_max
    const unsigned order = std::max(32u, k_max);
    MomentSeries series = scenario_series(cfg.scenario, order);
    const bool max_event = !is_filter || levy_max;
    std::vector<double> analytic;
    analytic.reserve(cfg.epsilon_grid.size());
    for (double eps : cfg.epsilon_grid) {
        TailBoundResult r = optimize_k_for_epsilon(series, eps, max_event, k_max);
        analytic.push_back(r.probability);
    }
    sim::ValidationVerdict verdict = max_event ? sim::validate_bound(report, analytic)
                                               : sim::validate_endpoint_bound(report, analytic);

    json j{{"scenario", scenario_to_json(cfg.scenario)},
           {"report", sim::sim_report_to_json(report, /*include_runtime=*/false,
                                              /*include_execution=*/false)},
           {"analytic_event", max_event ? "max" : "endpoint"},
           {"analytic_k_max", k_max},
           {"verdict", sim::verdict_to_json(verdict)}};

    if (out.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t g = 0; g < report.grid.size(); ++g) {
            const auto& pt = report.grid[g];
            rows.push_back({fmt_g(pt.epsilon, out.digits), std::to_string(pt.count_max),
                            std::to_string(pt.count_end), fmt_g(pt.p_max, out.digits),
                            fmt_g(pt.p_end, out.digits), fmt_g(pt.ci_max.lo, out.digits),
                            fmt_g(pt.ci_max.hi, out.digits), fmt_g(analytic[g], out.digits),
                            verdict.entries[g].pass ? "pass" : "FAIL"});
        }
        emit(out, j,
             {"epsilon", "count_max", "count_end", "p_max", "p_end", "ci_lo", "ci_hi",
              "analytic", "verdict"},
             rows);
        if (out.format == "table")
            std::cout << "\nverdict: " << (verdict.pass ? "PASS" : "FAIL") << "  (backend "
                      << report.backend << ", " << report.threads << " thread(s))\n";
    }
    std::cerr << "runtime_seconds " << report.runtime_seconds << "\n";
    return verdict.pass ? kOk : kVerdictFail;
}

// ---------------------------------------------------------------------------
// hardware: measure real binary32 rounding errors
// ---------------------------------------------------------------------------

int cmd_hardware(const std::string& n_text, const std::string& reps_text, std::uint64_t seed,
                 double lo, double hi, std::uint64_t cap, const OutputOptions& out) {
    sim::HardwareErrorConfig cfg;
    cfg.n = parse_count(n_text);
    cfg.replications = parse_count(reps_text);
    cfg.seed = seed;
    cfg.data_lo = lo;
    cfg.data_hi = hi;
    cfg.op_cap = cap;
    auto r = sim::hardware_error_paths(cfg);
    json j = sim::hardware_report_to_json(r);
    j["analytic_m2_reference"] = 1.0 / 3.0;
    j["data_range"] = {lo, hi};
    j["n"] = cfg.n;
    j["replications"] = cfg.replications;
    j["seed"] = seed;
    emit_kv(out, j);
    return kOk;
}

// ---------------------------------------------------------------------------
// scenario: build and serialize an error-variable family
// ---------------------------------------------------------------------------

int cmd_scenario(const AccumulationArgs& acc, std::optional<double> b1, std::optional<double> b2,
                 unsigned buckets, const OutputOptions& out) {
    const std::uint64_t n = parse_count(acc.n_text);
    const std::uint64_t m = parse_count(acc.m_text);
    const Rational u = parse_rational(acc.u_text);
    const bool is_filter = b1.has_value() || b2.has_value();
    if (is_filter && (!b1 || !b2))
        throw std::invalid_argument("filter scenario needs both --b1 and --b2");
    Scenario s = is_filter ? filter_error_scenario(FilterSpec{*b1, *b2}, n, u, m, buckets)
                           : accumulation_scenario(n, m, u);
    if (out.format == "json") {
        std::cout << scenario_to_json(s).dump(2) << "\n";
    } else if (out.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& g : s.groups)
            rows.push_back({g.label, "uniform_bounded", to_string(g.model.half_width()),
                            std::to_string(g.count)});
        print_csv({"label", "kind", "u", "count"}, rows);
    } else {
        std::cout << scenario_to_text(s);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistic bounds on accumulated floating-point round-off error"};
    app.require_subcommand(1);

    OutputOptions out;
    app.add_option("--format", out.format, "output format: table, json, or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--digits", out.digits, "significant digits in human-readable output")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();

    // epsilon
    auto* c_eps = app.add_subcommand("epsilon", "error threshold at a failure probability");
    AccumulationArgs eps_acc;
    double eps_P = 0;
    unsigned eps_k = 0, eps_kmax = 32;
    bool eps_nolevy = false;
    HypothesisFlags eps_hyp;
    add_accumulation_args(c_eps, eps_acc);
    c_eps->add_option("--P", eps_P, "failure probability bound, 0 < P <= 1")->required();
    c_eps->add_option("--k", eps_k, "fixed moment order (2k); 0 searches");
    c_eps->add_option("--k-max", eps_kmax, "search range for k")->check(CLI::Range(1u, 64u));
    c_eps->add_flag("--no-levy", eps_nolevy, "bound the endpoint |S_n| only");
    add_hypothesis_flags(c_eps, eps_hyp);

    // prob
    auto* c_prob = app.add_subcommand("prob", "probability bound at a fixed threshold");
    AccumulationArgs prob_acc;
    double prob_eps = 0;
    unsigned prob_k = 0, prob_kmax = 32;
    bool prob_nolevy = false;
    HypothesisFlags prob_hyp;
    add_accumulation_args(c_prob, prob_acc);
    c_prob->add_option("--epsilon", prob_eps, "error threshold")->required();
    c_prob->add_option("--k", prob_k, "fixed moment order (2k); 0 searches");
    c_prob->add_option("--k-max", prob_kmax, "search range for k")->check(CLI::Range(1u, 64u));
    c_prob->add_flag("--no-levy", prob_nolevy, "bound the endpoint |S_n| only");
    add_hypothesis_flags(c_prob, prob_hyp);

    // moments
    auto* c_mom = app.add_subcommand("moments", "moment bounds with closed-form cross-checks");
    AccumulationArgs mom_acc;
    unsigned mom_kmax = 4;
    add_accumulation_args(c_mom, mom_acc);
    c_mom->add_option("--k-max", mom_kmax, "largest k (moments up to 2k)")
        ->check(CLI::Range(1u, 64u));

    // table1
    auto* c_tab = app.add_subcommand("table1", "reproduce the published reference table");

    // filter
    auto* c_fil = app.add_subcommand("filter", "second-order IIR filter error analysis");
    double fil_b1 = 0, fil_b2 = 0, fil_P = 1e-9, fil_tol = 1e-12;
    std::string fil_n, fil_u, fil_m = "1";
    unsigned fil_kmax = 32, fil_buckets = 64;
    bool fil_levy = false;
    c_fil->add_option("--b1", fil_b1, "recurrence coefficient b1")->required();
    c_fil->add_option("--b2", fil_b2, "recurrence coefficient b2")->required();
    c_fil->add_option("--n", fil_n, "horizon (error bounded at this step)")->required();
    c_fil->add_option("--u", fil_u, "per-error half-width")->required();
    c_fil->add_option("--m", fil_m, "errors injected per step");
    c_fil->add_option("--P", fil_P, "failure probability bound")->capture_default_str();
    c_fil->add_option("--k-max", fil_kmax, "search range for k")->check(CLI::Range(1u, 64u));
    c_fil->add_option("--buckets", fil_buckets, "weight quantization buckets")
        ->check(CLI::Range(1u, 1u << 20));
    c_fil->add_option("--tol", fil_tol, "coefficient-sum tolerance");
    c_fil->add_flag("--levy-max", fil_levy,
                    "apply the factor-2 max-over-time inequality to the filter path (opt-in; "
                    "reweighted partial sums are outside its proved scope)");

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "seeded Monte Carlo validation");
    AccumulationArgs sim_acc;
    std::optional<double> sim_b1, sim_b2;
    std::uint64_t sim_seed = 0, sim_cap = sim::kDefaultOpCap, sim_chunk = 1024;
    std::string sim_reps;
    std::vector<double> sim_grid;
    unsigned sim_threads = 1, sim_kmax = 4, sim_buckets = 64;
    std::string sim_backend = "auto";
    bool sim_levy = false;
    add_accumulation_args(c_sim, sim_acc);
    c_sim->add_option("--b1", sim_b1, "filter coefficient (simulate the filter error path)");
    c_sim->add_option("--b2", sim_b2, "filter coefficient");
    c_sim->add_option("--seed", sim_seed, "64-bit stream seed")->capture_default_str();
    c_sim->add_option("--reps", sim_reps, "replications (exact integer, e.g. 1e5)")->required();
    c_sim->add_option("--eps", sim_grid, "epsilon grid (one or more values)")
        ->required()
        ->expected(-1);
    c_sim->add_option("--threads", sim_threads, "worker threads")->check(CLI::Range(1u, 256u));
    c_sim->add_option("--backend", sim_backend, "path kernel: auto, scalar, avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->capture_default_str();
    c_sim->add_option("--cap", sim_cap, "operation cap (replications x path steps)")
        ->capture_default_str();
    c_sim->add_option("--chunk", sim_chunk, "replications per work chunk");
    c_sim->add_option("--k-max", sim_kmax, "orders used for the analytic bound")
        ->check(CLI::Range(1u, 32u));
    c_sim->add_option("--buckets", sim_buckets, "weight buckets for filter scenarios");
    c_sim->add_flag("--levy-max", sim_levy, "validate the max event for filter scenarios too");

    // hardware
    auto* c_hw = app.add_subcommand("hardware", "measure real binary32 accumulation errors");
    std::uint64_t hw_seed = 0, hw_cap = sim::kDefaultOpCap;
    std::string hw_n = "1000", hw_reps = "10000";
    double hw_lo = 1.0, hw_hi = 2.0;
    c_hw->add_option("--n", hw_n, "accumulation length")->capture_default_str();
    c_hw->add_option("--reps", hw_reps, "replications")->capture_default_str();
    c_hw->add_option("--seed", hw_seed, "stream seed")->capture_default_str();
    c_hw->add_option("--lo", hw_lo, "data lower bound")->capture_default_str();
    c_hw->add_option("--hi", hw_hi, "data upper bound (exclusive)")->capture_default_str();
    c_hw->add_option("--cap", hw_cap, "operation cap");

    // scenario
    auto* c_scn = app.add_subcommand("scenario", "serialize an error-variable family");
    AccumulationArgs scn_acc;
    std::optional<double> scn_b1, scn_b2;
    unsigned scn_buckets = 64;
    add_accumulation_args(c_scn, scn_acc);
    c_scn->add_option("--b1", scn_b1, "filter coefficient");
    c_scn->add_option("--b2", scn_b2, "filter coefficient");
    c_scn->add_option("--buckets", scn_buckets, "weight buckets for filter scenarios");

    // let the global --format/--digits appear after the subcommand too
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints the message or the help text
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (c_eps->parsed())
            return cmd_epsilon(eps_acc, eps_P, eps_k, eps_kmax, eps_nolevy, eps_hyp, out);
        if (c_prob->parsed())
            return cmd_prob(prob_acc, prob_eps, prob_k, prob_kmax, prob_nolevy, prob_hyp, out);
        if (c_mom->parsed()) return cmd_moments(mom_acc, mom_kmax, out);
        if (c_tab->parsed()) return cmd_table1(out);
        if (c_fil->parsed())
            return cmd_filter(fil_b1, fil_b2, fil_n, fil_u, fil_m, fil_P, fil_kmax, fil_buckets,
                              fil_tol, fil_levy, out);
        if (c_sim->parsed())
            return cmd_simulate(sim_acc, sim_b1, sim_b2, sim_seed, sim_reps, sim_grid,
                                sim_threads, sim_backend, sim_cap, sim_chunk, sim_buckets,
                                sim_kmax, sim_levy, out);
        if (c_hw->parsed()) return cmd_hardware(hw_n, hw_reps, hw_seed, hw_lo, hw_hi, hw_cap, out);
        if (c_scn->parsed()) return cmd_scenario(scn_acc, scn_b1, scn_b2, scn_buckets, out);
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
