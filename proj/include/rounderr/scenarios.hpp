#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rounderr/moment_series.hpp"

namespace rounderr {

enum class MantissaRepr { kSignMagnitude, kTwosComplement };
enum class ExponentMode { kFloating, kFixed };
enum class RoundingMode { kNearest, kDirected };

// Number format: p mantissa bits including the leading one, with either a
// varying exponent (floating point) or a constant one (fixed point).
struct FpFormat {
    unsigned precision = 24;
    MantissaRepr repr = MantissaRepr::kSignMagnitude;
    ExponentMode mode = ExponentMode::kFloating;
    int fixed_exponent = 0;

    static FpFormat binary32() { return {24, MantissaRepr::kSignMagnitude, ExponentMode::kFloating, 0}; }
    static FpFormat binary64() { return {53, MantissaRepr::kSignMagnitude, ExponentMode::kFloating, 0}; }
    static FpFormat fixed_point(unsigned precision, int exponent,
                                MantissaRepr repr = MantissaRepr::kTwosComplement) {
        return {precision, repr, ExponentMode::kFixed, exponent};
    }

    void validate() const;
};

// Spacing between representable numbers at the given exponent: 2^{e-p+1}.
// Fixed-point formats use their constant exponent and ignore the argument.
Rational ulp(const FpFormat& format, int exponent);

// Error model of one rounding at the given exponent. Round-to-nearest gives
// a symmetric variable with half-width ulp/2 and no bias. Directed rounding
// gives the centered variable X' = X - E(X), again half-width ulp/2, plus a
// deterministic offset of magnitude ulp/2 that the caller must track
// separately (it is a bias, not a random term).
struct RoundingErrorModel {
    MomentModel model;
    Rational bias_magnitude;  // 0 for round-to-nearest
};
RoundingErrorModel rounding_error_model(const FpFormat& format, int exponent,
                                        RoundingMode rounding);

// A group of i.i.d. symmetric error variables.
struct ErrorVariableSpec {
    MomentModel model;
    std::uint64_t count = 1;
    std::string label;
};

// Finite family of independent symmetric error variables. The group order
// defines the path order used by the simulator.
struct Scenario {
    std::vector<ErrorVariableSpec> groups;
    std::string description;
    bool degenerate = false;  // all weights vanished: zero error by construction

    std::uint64_t total_count() const;
    // Deterministic worst case sum of half-widths: |S| never exceeds this.
    Rational support_bound() const;
};

// n iterations with m unit-half-width-u errors each: n*m i.i.d. variables.
Scenario accumulation_scenario(std::uint64_t n, std::uint64_t m, const Rational& u);

// n rounding errors plus n sensor errors with their own half-width.
Scenario sensor_scenario(std::uint64_t n, const Rational& u_round, const Rational& u_sensor);

// Moment series of the whole scenario: per-group n-fold powers combined by
// series products, O(groups * order^2 * log count).
MomentSeries scenario_series(const Scenario& s, unsigned order);

// Serialization. Rationals travel as exact "num/den" strings.
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
std::string scenario_to_text(const Scenario& s);

}  // namespace rounderr
