#pragma once

#include <cmath>
#include <stdexcept>

#include "lsseg/field.hpp"
#include "lsseg/region.hpp"

namespace lsseg {

enum class SpfKind { global, local, hybrid, sbgfrls };

/// A signed pressure field: values in [-1, 1], max |value| = 1 unless the
/// field is identically zero. The sign tells the contour where to expand or
/// shrink; the magnitude scales the local speed.
struct SpfField {
    ScalarField values;
    SpfKind kind = SpfKind::global;
};

namespace detail {

// Max-abs normalization shared by the global/local/sbgfrls constructions.
// A vanishing numerator yields the all-zero field, which freezes evolution.
inline ScalarField normalize_to_unit(ScalarField numerator) {
    double denom = numerator.max_abs();
    if (denom < 1e-12)
        return ScalarField(numerator.width(), numerator.height(), 0.0);
    for (size_t i = 0; i < numerator.size(); ++i)
        numerator[i] /= denom;
    return numerator;
}

inline void require_nondegenerate(const RegionStats& stats, const char* who) {
    if (stats.degenerate())
        throw std::invalid_argument(std::string(who) + ": degenerate region statistics (one region empty)");
}

}  // namespace detail

/// Pressure field (I - (c1+c2)/2) / max|...|: positive where the pixel is
/// brighter than the mid-level of the two region means.
inline SpfField spf_sbgfrls(const ScalarField& image, const RegionStats& stats) {
    detail::require_nondegenerate(stats, "spf_sbgfrls");
    ScalarField num(image.width(), image.height());
    const double mid = 0.5 * (stats.c1 + stats.c2);
    for (size_t i = 0; i < image.size(); ++i)
        num[i] = image[i] - mid;
    return SpfField{detail::normalize_to_unit(std::move(num)), SpfKind::sbgfrls};
}

/// Threshold combining the two region means with the inside-median:
/// ((c1 - 2m)^2 - c2^2) / (2 (c1 - c2)), which reduces to (c1 + c2)/2 when
/// m = c1. Falls back to (c1 + c2)/2 outright when c1 and c2 coincide.
struct GlobalThreshold {
    double value = 0.0;
    bool fell_back = false;  // |c1 - c2| <= 1e-12, two-phase assumption collapsed
};

inline GlobalThreshold global_threshold(const RegionStats& stats) {
    const double c1 = stats.c1, c2 = stats.c2, m = stats.m;
    if (std::fabs(c1 - c2) <= 1e-12)
        return {0.5 * (c1 + c2), true};
    // difference-of-squares form; keeps full precision as c1 -> c2
    const double a = c1 - 2.0 * m;
    const double value = ((a - c2) * (a + c2)) / (2.0 * (c1 - c2));
    return {value, false};
}

/// Global pressure field (I - global_threshold) / max|...|.
inline SpfField spf_global(const ScalarField& image, const RegionStats& stats) {
    detail::require_nondegenerate(stats, "spf_global");
    const double thr = global_threshold(stats).value;
    ScalarField num(image.width(), image.height());
    for (size_t i = 0; i < image.size(); ++i)
        num[i] = image[i] - thr;
    return SpfField{detail::normalize_to_unit(std::move(num)), SpfKind::global};
}

/// Local pressure field (e2 - e1) / max|e2 - e1| from the pointwise local
/// energies: positive where leaving the pixel outside costs more energy
/// than keeping it inside.
inline SpfField spf_local(const ScalarField& e1, const ScalarField& e2) {
    if (!e1.same_dims(e2))
        throw std::invalid_argument("spf_local: e1 and e2 dimensions differ");
    ScalarField num(e1.width(), e1.height());
    for (size_t i = 0; i < e1.size(); ++i)
        num[i] = e2[i] - e1[i];
    return SpfField{detail::normalize_to_unit(std::move(num)), SpfKind::local};
}

/// Convex combination w * global + (1 - w) * local. Not re-normalized: a
/// convex combination of [-1,1] fields stays in [-1,1].
inline SpfField spf_hybrid(const SpfField& g, const SpfField& l, double w) {
    if (g.kind != SpfKind::global || l.kind != SpfKind::local)
        throw std::invalid_argument("spf_hybrid: expects a global and a local field");
    if (!g.values.same_dims(l.values))
        throw std::invalid_argument("spf_hybrid: dimension mismatch");
    if (w < 0.0 || w > 1.0)
        throw std::invalid_argument("spf_hybrid: w must be in [0, 1]");
    ScalarField out(g.values.width(), g.values.height());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = w * g.values[i] + (1.0 - w) * l.values[i];
    return SpfField{std::move(out), SpfKind::hybrid};
}

}  // namespace lsseg
