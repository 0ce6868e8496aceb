#pragma once

#include <algorithm>
#include <cmath>

namespace carleson {

/// Real interval [lo, hi). Degenerate (hi <= lo) intervals are treated as empty.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    bool empty() const { return !(lo < hi); }

    /// Interval with the same center and c times the length.
    Interval dilated(double c) const {
        const double m = center(), r = 0.5 * c * length();
        return {m - r, m + r};
    }
    Interval translated(double s) const { return {lo + s, hi + s}; }

    bool contains(double x) const { return x >= lo && x < hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Interval& o) const { return lo < o.hi && o.lo < hi; }

    double dist(double x) const {
        if (x < lo) return lo - x;
        if (x > hi) return x - hi;
        return 0.0;
    }
    double dist(const Interval& o) const {
        if (o.hi < lo) return lo - o.hi;
        if (hi < o.lo) return o.lo - hi;
        return 0.0;
    }
};

/// (1 + dist(x, I)/|I|)^{-decay}, the polynomially localized cutoff attached to I.
inline double chi_tilde(const Interval& I, double x, double decay = 10.0) {
    return std::pow(1.0 + I.dist(x) / I.length(), -decay);
}

} // namespace carleson
