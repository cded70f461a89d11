#pragma once

#include <cstdint>

namespace qmono {

// |delta| at or below this many bits is classified as monogamous at the
// boundary; optimizer noise dominates below this scale.
inline constexpr double kSignTol = 1e-9;

inline constexpr long kDefaultPowerCap = 1'000'000;

// Non-negative correlation scores of one nodal bipartition:
// x = Q_{A:BC}, y = Q_{AB}, z = Q_{AC}, all in the measure's units.
struct ScoreTriple {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

enum class MonogamyStatus {
    monogamous,           // |delta| <= kSignTol, boundary case
    strictly_monogamous,  // delta > kSignTol
    non_monogamous,       // delta < -kSignTol
    no_finite_power,      // y >= x or z >= x with the other score positive
};

// Outcome of the minimal-power search. `power` is meaningful only for
// kind == found. no_finite_power marks a premise violation (some pair score
// reaches or exceeds the joint score); cap_exceeded means the search passed
// the cap without finding the threshold.
struct MinPowerResult {
    enum class Kind { found, no_finite_power, cap_exceeded };

    Kind kind = Kind::found;
    long power = 0;
};

struct MonogamyRecord {
    ScoreTriple triple;
    double delta = 0.0;  // x - y - z
    MinPowerResult min_power;
    MonogamyStatus status = MonogamyStatus::monogamous;
};

// x^m - y^m - z^m. Throws std::invalid_argument for m < 1 or a triple with
// a negative or non-finite entry.
double delta_score(const ScoreTriple& t, long m);

// True when x^m >= y^m + z^m, evaluated in ratio form so that large powers
// neither overflow nor lose the sign.
bool monogamous_at(const ScoreTriple& t, long m);

// Smallest m >= 1 with x^m >= y^m + z^m. Doubles an upper bound first, then
// binary-searches; valid because for 0 <= y,z < x the predicate is monotone
// in m (once satisfied it stays satisfied).
MinPowerResult min_monogamy_power(const ScoreTriple& t, long cap = kDefaultPowerCap);

MonogamyRecord classify_triple(const ScoreTriple& t, long cap = kDefaultPowerCap);

}  // namespace qmono
