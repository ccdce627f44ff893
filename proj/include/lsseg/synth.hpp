#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsseg/field.hpp"
#include "lsseg/noise.hpp"

namespace lsseg {

/// One painted object: a disk (center, radius) or an axis-aligned rectangle
/// (center, half extents). Later shapes overwrite earlier ones.
struct Shape {
    enum class Kind { disk, rectangle };
    Kind kind = Kind::disk;
    double cx = 0, cy = 0;
    double a = 0, b = 0;  // disk: a = radius; rectangle: half extents
    double intensity = 1.0;

    static Shape disk(double cx, double cy, double radius, double intensity) {
        return Shape{Kind::disk, cx, cy, radius, radius, intensity};
    }
    static Shape rectangle(double cx, double cy, double half_w, double half_h, double intensity) {
        return Shape{Kind::rectangle, cx, cy, half_w, half_h, intensity};
    }

    bool contains(int x, int y) const {
        if (kind == Kind::disk) {
            double dx = x - cx, dy = y - cy;
            return dx * dx + dy * dy <= a * a;
        }
        return std::fabs(x - cx) <= a && std::fabs(y - cy) <= b;
    }
};

struct BiasSpec {
    enum class Kind { none, linear, radial };
    Kind kind = Kind::none;
    double amplitude = 0.0;
};

/// Ground-truthed synthetic scene: background plus shapes, an optional
/// smooth bias field, and optional seeded noise. The truth mask is purely
/// geometric (pre-bias, pre-noise).
struct SynthSpec {
    int width = 128;
    int height = 128;
    std::vector<Shape> shapes;
    double background_intensity = 0.0;
    BiasSpec bias;
    std::optional<NoiseSpec> noise;
    uint64_t seed = 0;

    void validate() const {
        if (width < 3 || height < 3)
            throw std::invalid_argument("SynthSpec: dimensions must be at least 3x3");
        if (background_intensity < 0.0 || background_intensity > 1.0)
            throw std::invalid_argument("SynthSpec: background_intensity must be in [0, 1]");
        for (const Shape& s : shapes)
            if (s.intensity < 0.0 || s.intensity > 1.0)
                throw std::invalid_argument("SynthSpec: shape intensity must be in [0, 1]");
        if (bias.kind != BiasSpec::Kind::none && bias.amplitude < 0.0)
            throw std::invalid_argument("SynthSpec: bias amplitude must be >= 0");
        if (noise) noise->validate();
    }
};

struct SynthResult {
    ScalarField image;
    SegMask truth;
};

/// Renders the scene. Bias fields: linear = amplitude * (x/W - 1/2) * 2
/// across the width, radial = amplitude * (1 - r/r_max) from the center.
/// Noise seeding uses spec.seed, so one seed reproduces the whole scene.
inline SynthResult generate(const SynthSpec& spec) {
    spec.validate();
    ScalarField image(spec.width, spec.height, spec.background_intensity);
    SegMask truth(spec.width, spec.height);

    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            for (const Shape& s : spec.shapes) {
                if (s.contains(x, y)) {
                    image.at(x, y) = s.intensity;  // later shapes overwrite
                    truth.set(x, y, true);
                }
            }
        }
    }

    if (spec.bias.kind == BiasSpec::Kind::linear) {
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x)
                image.at(x, y) += spec.bias.amplitude *
                                  (static_cast<double>(x) / spec.width - 0.5) * 2.0;
    } else if (spec.bias.kind == BiasSpec::Kind::radial) {
        const double cx = 0.5 * (spec.width - 1), cy = 0.5 * (spec.height - 1);
        const double r_max = std::sqrt(cx * cx + cy * cy);
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) {
                double r = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
                image.at(x, y) += spec.bias.amplitude * (1.0 - r / r_max);
            }
    }

    for (size_t i = 0; i < image.size(); ++i)
        image[i] = image[i] < 0.0 ? 0.0 : (image[i] > 1.0 ? 1.0 : image[i]);

    if (spec.noise) {
        NoiseSpec n = *spec.noise;
        n.seed = spec.seed;
        image = add_noise(image, n);
    }
    return SynthResult{std::move(image), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Canonical benchmark scenes
// ---------------------------------------------------------------------------

/// One disk on a darker background with a left-to-right linear bias.
inline SynthSpec suite_single_bias(uint64_t seed = 1) {
    SynthSpec s;
    s.width = 128;
    s.height = 128;
    s.shapes = {Shape::disk(64, 64, 32, 0.75)};
    s.background_intensity = 0.25;
    s.bias = {BiasSpec::Kind::linear, 0.15};
    s.seed = seed;
    return s;
}

/// Three objects (two disks, one rectangle) under the same linear bias.
/// The objects dominate the default initial contour's interior, as in the
/// usual multi-object test compositions.
inline SynthSpec suite_multi3_bias(uint64_t seed = 1) {
    SynthSpec s;
    s.width = 128;
    s.height = 128;
    s.shapes = {Shape::disk(44, 44, 21, 0.75),
                Shape::disk(88, 40, 16, 0.75),
                Shape::rectangle(64, 88, 24, 12, 0.75)};
    s.background_intensity = 0.25;
    s.bias = {BiasSpec::Kind::linear, 0.15};
    s.seed = seed;
    return s;
}

/// Crisp disk scene reused by the noise suites.
inline SynthSpec noise_base_scene(uint64_t seed) {
    SynthSpec s;
    s.width = 128;
    s.height = 128;
    s.shapes = {Shape::disk(64, 64, 32, 0.8)};
    s.background_intensity = 0.2;
    s.seed = seed;
    return s;
}

struct BenchCase {
    std::string name;
    SynthSpec spec;
};

/// Named benchmark suites. Case seeds derive from the base seed so a single
/// seed pins the whole suite.
inline std::vector<BenchCase> bench_suite(const std::string& suite, uint64_t seed = 1) {
    std::vector<BenchCase> cases;
    if (suite == "single-bias") {
        cases.push_back({"single-bias", suite_single_bias(seed)});
    } else if (suite == "multi3-bias") {
        cases.push_back({"multi3-bias", suite_multi3_bias(seed)});
    } else if (suite == "noise-sweep") {
        const double variances[] = {0.01, 0.02, 0.03, 0.04};
        for (int i = 0; i < 4; ++i) {
            SynthSpec s = noise_base_scene(seed + static_cast<uint64_t>(i));
            s.noise = NoiseSpec{NoiseKind::gaussian, 0.0, variances[i], 0.0, s.seed};
            char name[32];
            std::snprintf(name, sizeof(name), "gaussian-%.2f", variances[i]);
            cases.push_back({name, s});
        }
    } else if (suite == "noise-types") {
        const NoiseKind kinds[] = {NoiseKind::gaussian, NoiseKind::salt_pepper,
                                   NoiseKind::poisson, NoiseKind::speckle};
        const char* names[] = {"gaussian", "salt-pepper", "poisson", "speckle"};
        for (int i = 0; i < 4; ++i) {
            SynthSpec s = noise_base_scene(seed + static_cast<uint64_t>(i));
            NoiseSpec n;
            n.kind = kinds[i];
            n.seed = s.seed;
            if (kinds[i] == NoiseKind::gaussian || kinds[i] == NoiseKind::speckle)
                n.variance = 0.01;
            if (kinds[i] == NoiseKind::salt_pepper) n.density = 0.01;
            s.noise = n;
            cases.push_back({names[i], s});
        }
    } else {
        throw std::invalid_argument("unknown suite: " + suite);
    }
    return cases;
}

/// Spec for a named suite's single scene; the suites with multiple cases
/// are only addressable through bench_suite.
inline SynthSpec named_scene(const std::string& name, uint64_t seed = 1) {
    if (name == "single-bias") return suite_single_bias(seed);
    if (name == "multi3-bias") return suite_multi3_bias(seed);
    throw std::invalid_argument("unknown scene: " + name);
}

}  // namespace lsseg
