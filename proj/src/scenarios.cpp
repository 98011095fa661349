#include "rounderr/scenarios.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rounderr {

void FpFormat::validate() const {
    if (precision < 2) throw std::invalid_argument("format precision must be at least 2");
}

Rational ulp(const FpFormat& format, int exponent) {
    format.validate();
    const int e = format.mode == ExponentMode::kFixed ? format.fixed_exponent : exponent;
    return pow2(static_cast<long>(e) - static_cast<long>(format.precision) + 1);
}

RoundingErrorModel rounding_error_model(const FpFormat& format, int exponent,
                                        RoundingMode rounding) {
    Rational half = ulp(format, exponent) / 2;
    switch (rounding) {
        case RoundingMode::kNearest:
            return {MomentModel::uniform_bounded(half), Rational(0)};
        case RoundingMode::kDirected:
            // Centered: uniform on a width-ulp interval shifted to zero mean.
            return {MomentModel::uniform_bounded(half), half};
    }
    throw std::logic_error("unreachable");
}

std::uint64_t Scenario::total_count() const {
    std::uint64_t total = 0;
    for (const auto& g : groups) {
        if (g.count > UINT64_MAX - total) throw std::overflow_error("variable count overflow");
        total += g.count;
    }
    return total;
}

Rational Scenario::support_bound() const {
    Rational sum(0);
    for (const auto& g : groups)
        sum += g.model.half_width() * Rational(mpz_class(static_cast<unsigned long>(g.count)));
    return sum;
}

Scenario accumulation_scenario(std::uint64_t n, std::uint64_t m, const Rational& u) {
    if (n < 1 || m < 1) throw std::invalid_argument("n and m must be positive");
    if (sgn(u) <= 0) throw std::invalid_argument("u must be positive");
    if (m != 0 && n > UINT64_MAX / m) throw std::overflow_error("n*m exceeds 64 bits");
    Scenario s;
    s.description = "accumulation of " + std::to_string(n) + " steps, " + std::to_string(m) +
                    " error(s) per step";
    s.groups.push_back({MomentModel::uniform_bounded(u), n * m, "rounding"});
    return s;
}

Scenario sensor_scenario(std::uint64_t n, const Rational& u_round, const Rational& u_sensor) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (sgn(u_round) <= 0 || sgn(u_sensor) <= 0)
        throw std::invalid_argument("half-widths must be positive");
    Scenario s;
    s.description = "accumulation of " + std::to_string(n) + " sensor readings";
    s.groups.push_back({MomentModel::uniform_bounded(u_round), n, "rounding"});
    s.groups.push_back({MomentModel::uniform_bounded(u_sensor), n, "sensor"});
    return s;
}

MomentSeries scenario_series(const Scenario& s, unsigned order) {
    MomentSeries acc = MomentSeries::identity(order);
    for (const auto& g : s.groups)
        acc = series_product(acc, series_power(series_for_variable(g.model, order), g.count));
    return acc;
}

namespace {

const char* kind_name(MomentKind k) {
    switch (k) {
        case MomentKind::kUniformBounded: return "uniform_bounded";
        case MomentKind::kSupportBounded: return "support_bounded";
        case MomentKind::kCustom: return "custom";
    }
    return "?";
}

MomentKind kind_from_name(const std::string& name) {
    if (name == "uniform_bounded") return MomentKind::kUniformBounded;
    if (name == "support_bounded") return MomentKind::kSupportBounded;
    if (name == "custom") return MomentKind::kCustom;
    throw std::invalid_argument("unknown moment kind: " + name);
}

}  // namespace

nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : s.groups) {
        nlohmann::json jg{{"kind", kind_name(g.model.kind())},
                          {"u", to_string(g.model.half_width())},
                          {"count", g.count},
                          {"label", g.label}};
        if (g.model.kind() == MomentKind::kCustom) {
            nlohmann::json ms = nlohmann::json::array();
            for (const auto& m : g.model.custom_moments()) ms.push_back(to_string(m));
            jg["custom_moments"] = ms;
        }
        groups.push_back(std::move(jg));
    }
    return nlohmann::json{{"description", s.description},
                          {"degenerate", s.degenerate},
                          {"groups", std::move(groups)}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    s.description = j.value("description", "");
    s.degenerate = j.value("degenerate", false);
    for (const auto& jg : j.at("groups")) {
        MomentKind kind = kind_from_name(jg.at("kind").get<std::string>());
        Rational u = parse_rational(jg.at("u").get<std::string>());
        MomentModel model = [&] {
            switch (kind) {
                case MomentKind::kUniformBounded: return MomentModel::uniform_bounded(u);
                case MomentKind::kSupportBounded: return MomentModel::support_bounded(u);
                case MomentKind::kCustom: {
                    std::vector<Rational> ms;
                    for (const auto& m : jg.at("custom_moments"))
                        ms.push_back(parse_rational(m.get<std::string>()));
                    return MomentModel::custom(u, std::move(ms));
                }
            }
            throw std::logic_error("unreachable");
        }();
        s.groups.push_back({std::move(model), jg.at("count").get<std::uint64_t>(),
                            jg.value("label", "")});
    }
    return s;
}

std::string scenario_to_text(const Scenario& s) {
    std::ostringstream out;
    out << "scenario {\n";
    out << "  description: " << s.description << "\n";
    if (s.degenerate) out << "  degenerate: true\n";
    for (const auto& g : s.groups) {
        out << "  group {\n";
        out << "    label: " << g.label << "\n";
        out << "    kind: " << kind_name(g.model.kind()) << "\n";
        out << "    u: " << to_string(g.model.half_width()) << "\n";
        out << "    count: " << g.count << "\n";
        if (g.model.kind() == MomentKind::kCustom) {
            out << "    custom_moments: [";
            bool first = true;
            for (const auto& m : g.model.custom_moments()) {
                if (!first) out << ", ";
                out << to_string(m);
                first = false;
            }
            out << "]\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace rounderr
