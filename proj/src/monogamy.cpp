#include "qmono/monogamy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmono {

namespace {

void check_triple(const ScoreTriple& t) {
    for (double v : {t.x, t.y, t.z}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("ScoreTriple: entries must be finite and non-negative");
        }
    }
}

}  // namespace

double delta_score(const ScoreTriple& t, long m) {
    check_triple(t);
    if (m < 1) throw std::invalid_argument("delta_score: power must be >= 1");
    const double md = static_cast<double>(m);
    return std::pow(t.x, md) - std::pow(t.y, md) - std::pow(t.z, md);
}

bool monogamous_at(const ScoreTriple& t, long m) {
    check_triple(t);
    if (m < 1) throw std::invalid_argument("monogamous_at: power must be >= 1");
    if (t.y == 0.0 || t.z == 0.0) return t.x >= std::max(t.y, t.z);
    if (t.x == 0.0) return false;
    const double md = static_cast<double>(m);
    return std::pow(t.y / t.x, md) + std::pow(t.z / t.x, md) <= 1.0;
}

MinPowerResult min_monogamy_power(const ScoreTriple& t, long cap) {
    check_triple(t);
    if (cap < 1) throw std::invalid_argument("min_monogamy_power: cap must be >= 1");

    // Degenerate zero: monogamy reduces to x >= max(y, z), at every power.
    if (t.y == 0.0 || t.z == 0.0) {
        if (t.x >= std::max(t.y, t.z)) return {MinPowerResult::Kind::found, 1};
        return {MinPowerResult::Kind::no_finite_power, 0};
    }
    // Both pair scores positive: a pair score at or above x keeps
    // y^m + z^m > x^m for every m.
    if (t.y >= t.x || t.z >= t.x) {
        return {MinPowerResult::Kind::no_finite_power, 0};
    }

    if (monogamous_at(t, 1)) return {MinPowerResult::Kind::found, 1};

    // Ratios are in (0, 1), so the predicate is monotone in m: bracket by
    // doubling, then binary-search the threshold.
    long lo = 1, hi = std::min<long>(2, cap);
    while (!monogamous_at(t, hi)) {
        if (hi >= cap) return {MinPowerResult::Kind::cap_exceeded, 0};
        lo = hi;
        hi = hi > cap / 2 ? cap : hi * 2;
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (monogamous_at(t, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {MinPowerResult::Kind::found, hi};
}

MonogamyRecord classify_triple(const ScoreTriple& t, long cap) {
    MonogamyRecord rec;
    rec.triple = t;
    rec.delta = delta_score(t, 1);
    rec.min_power = min_monogamy_power(t, cap);
    if (rec.min_power.kind == MinPowerResult::Kind::no_finite_power) {
        rec.status = MonogamyStatus::no_finite_power;
    } else if (rec.delta > kSignTol) {
        rec.status = MonogamyStatus::strictly_monogamous;
    } else if (rec.delta >= -kSignTol) {
        rec.status = MonogamyStatus::monogamous;
    } else {
        rec.status = MonogamyStatus::non_monogamous;
    }
    return rec;
}

}  // namespace qmono
