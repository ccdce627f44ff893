#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lsseg/field.hpp"

namespace lsseg {

/// Smoothed step 0.5 * (1 + (2/pi) * atan(phi / epsilon)). Strictly
/// increasing, range (0, 1), H(0) = 0.5 exactly.
inline double heaviside(double phi_value, double epsilon) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("heaviside: epsilon must be > 0");
    return 0.5 * (1.0 + (2.0 / std::numbers::pi) * std::atan(phi_value / epsilon));
}

/// (1/pi) * epsilon / (epsilon^2 + phi^2) — the derivative of heaviside.
inline double dirac(double phi_value, double epsilon) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("dirac: epsilon must be > 0");
    return (1.0 / std::numbers::pi) * epsilon / (epsilon * epsilon + phi_value * phi_value);
}

/// Scalar statistics of the two crisp regions of a level set:
/// c1/m over {phi >= 0}, c2 over {phi < 0}. When a region is empty its
/// statistics fall back to the global mean and the matching flag is set.
struct RegionStats {
    double c1 = 0.0;
    double c2 = 0.0;
    double m = 0.0;
    bool inside_empty = false;
    bool outside_empty = false;

    bool degenerate() const { return inside_empty || outside_empty; }
};

/// Means and inside-median over the crisp sets {phi >= 0} / {phi < 0}.
/// Median of an even count is the average of the two middle values.
inline RegionStats region_stats(const ScalarField& image, const ScalarField& phi) {
    if (!image.same_dims(phi))
        throw std::invalid_argument("region_stats: image and phi dimensions differ");

    std::vector<double> inside;
    inside.reserve(image.size());
    double sum_in = 0.0, sum_out = 0.0, sum_all = 0.0;
    size_t n_out = 0;
    for (size_t i = 0; i < image.size(); ++i) {
        double v = image[i];
        sum_all += v;
        if (phi[i] >= 0.0) {
            inside.push_back(v);
            sum_in += v;
        } else {
            sum_out += v;
            ++n_out;
        }
    }

    RegionStats s;
    const double global_mean = sum_all / static_cast<double>(image.size());
    if (inside.empty()) {
        s.inside_empty = true;
        s.c1 = global_mean;
        s.m = global_mean;
    } else {
        s.c1 = sum_in / static_cast<double>(inside.size());
        const size_t n = inside.size();
        auto mid = inside.begin() + n / 2;
        std::nth_element(inside.begin(), mid, inside.end());
        if (n % 2 == 1) {
            s.m = *mid;
        } else {
            double hi = *mid;
            double lo = *std::max_element(inside.begin(), mid);
            s.m = 0.5 * (lo + hi);
        }
    }
    if (n_out == 0) {
        s.outside_empty = true;
        s.c2 = global_mean;
    } else {
        s.c2 = sum_out / static_cast<double>(n_out);
    }
    return s;
}

/// Normalized symmetric 1-D Gaussian, applied separably in 2-D.
struct GaussianKernel {
    double sigma = 0.0;
    int radius = 0;
    std::vector<double> taps;  // size 2*radius + 1, sums to 1
};

inline GaussianKernel make_kernel(double sigma, int radius) {
    if (sigma <= 0.0)
        throw std::invalid_argument("make_kernel: sigma must be > 0");
    if (radius < 1)
        throw std::invalid_argument("make_kernel: radius must be >= 1");
    GaussianKernel k;
    k.sigma = sigma;
    k.radius = radius;
    k.taps.resize(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double t = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        k.taps[i + radius] = t;
        sum += t;
    }
    for (double& t : k.taps) t /= sum;
    // enforce exact symmetry of the normalized taps
    for (int i = 0; i < radius; ++i)
        k.taps[2 * radius - i] = k.taps[i];
    return k;
}

/// Default truncation radius for a Gaussian of width sigma.
inline int kernel_radius_for(double sigma) {
    int r = static_cast<int>(std::lround(3.0 * sigma));
    return r < 1 ? 1 : r;
}

namespace detail {

inline int clamp_index(int i, int n) {
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

}  // namespace detail

/// Separable convolution with replicate boundary padding: horizontal pass
/// then vertical pass. Equals the direct 2-D sum with the outer-product
/// kernel. Summation order per output pixel is fixed (tap order), so results
/// are reproducible bit-for-bit.
inline ScalarField convolve(const ScalarField& field, const GaussianKernel& kernel) {
    const int w = field.width(), h = field.height(), r = kernel.radius;
    ScalarField tmp(w, h), out(w, h);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int d = -r; d <= r; ++d)
                acc += kernel.taps[d + r] * field.at(detail::clamp_index(x + d, w), y);
            tmp.at(x, y) = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int d = -r; d <= r; ++d)
                acc += kernel.taps[d + r] * tmp.at(x, detail::clamp_index(y + d, h));
            out.at(x, y) = acc;
        }
    }
    return out;
}

/// Local fitting means f1/f2 (kernel-weighted means of the image inside and
/// outside the contour) and the pointwise local energies e1/e2 (kernel-
/// weighted integrals of squared residuals against f1/f2).
struct LocalFields {
    ScalarField f1, f2, e1, e2;
};

/// f1 = K*(H(phi) I) / K*H(phi), f2 the (1 - H) analog. Denominators are
/// analytically positive (H is strictly inside (0,1)); they are floored at
/// 1e-12 against rounding.
inline LocalFields local_fit(const ScalarField& image, const ScalarField& phi,
                             const GaussianKernel& kernel, double epsilon) {
    if (!image.same_dims(phi))
        throw std::invalid_argument("local_fit: image and phi dimensions differ");
    const int w = image.width(), h = image.height();

    ScalarField h1(w, h), h2(w, h), h1i(w, h), h2i(w, h);
    for (size_t i = 0; i < image.size(); ++i) {
        double hv = heaviside(phi[i], epsilon);
        h1[i] = hv;
        h2[i] = 1.0 - hv;
        h1i[i] = hv * image[i];
        h2i[i] = (1.0 - hv) * image[i];
    }

    ScalarField num1 = convolve(h1i, kernel);
    ScalarField den1 = convolve(h1, kernel);
    ScalarField num2 = convolve(h2i, kernel);
    ScalarField den2 = convolve(h2, kernel);

    LocalFields lf{ScalarField(w, h), ScalarField(w, h), ScalarField(w, h), ScalarField(w, h)};
    constexpr double kFloor = 1e-12;
    for (size_t i = 0; i < image.size(); ++i) {
        lf.f1[i] = num1[i] / std::max(den1[i], kFloor);
        lf.f2[i] = num2[i] / std::max(den2[i], kFloor);
    }
    return lf;
}

/// Fills e1/e2 of `fields` using the expansion
///   e1(x) = K*(I^2 H) - 2 f1 K*(I H) + f1^2 K*H
/// and the (1 - H) analog for e2. Tiny negative rounding residue is clamped
/// to zero.
inline void local_energies(const ScalarField& image, const ScalarField& phi,
                           LocalFields& fields, const GaussianKernel& kernel, double epsilon) {
    if (!image.same_dims(phi) || !image.same_dims(fields.f1))
        throw std::invalid_argument("local_energies: dimension mismatch");
    const int w = image.width(), h = image.height();

    ScalarField h1(w, h), h2(w, h), h1i(w, h), h2i(w, h), h1ii(w, h), h2ii(w, h);
    for (size_t i = 0; i < image.size(); ++i) {
        double hv = heaviside(phi[i], epsilon);
        double iv = image[i];
        h1[i] = hv;
        h2[i] = 1.0 - hv;
        h1i[i] = hv * iv;
        h2i[i] = (1.0 - hv) * iv;
        h1ii[i] = hv * iv * iv;
        h2ii[i] = (1.0 - hv) * iv * iv;
    }

    ScalarField a1 = convolve(h1ii, kernel), b1 = convolve(h1i, kernel), c1 = convolve(h1, kernel);
    ScalarField a2 = convolve(h2ii, kernel), b2 = convolve(h2i, kernel), c2 = convolve(h2, kernel);

    fields.e1 = ScalarField(w, h);
    fields.e2 = ScalarField(w, h);
    for (size_t i = 0; i < image.size(); ++i) {
        double f1 = fields.f1[i], f2 = fields.f2[i];
        double e1 = a1[i] - 2.0 * f1 * b1[i] + f1 * f1 * c1[i];
        double e2 = a2[i] - 2.0 * f2 * b2[i] + f2 * f2 * c2[i];
        fields.e1[i] = e1 < 0.0 ? 0.0 : e1;
        fields.e2[i] = e2 < 0.0 ? 0.0 : e2;
    }
}

}  // namespace lsseg
