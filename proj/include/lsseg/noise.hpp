#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsseg/field.hpp"

namespace lsseg {

enum class NoiseKind { gaussian, salt_pepper, poisson, speckle };

inline const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::salt_pepper: return "salt_pepper";
        case NoiseKind::poisson: return "poisson";
        case NoiseKind::speckle: return "speckle";
    }
    return "?";
}

inline NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "gaussian") return NoiseKind::gaussian;
    if (s == "salt_pepper" || s == "salt-pepper") return NoiseKind::salt_pepper;
    if (s == "poisson") return NoiseKind::poisson;
    if (s == "speckle") return NoiseKind::speckle;
    throw std::invalid_argument("unknown noise kind: " + s);
}

/// Seeded description of one noise injection. `mean` applies to gaussian,
/// `variance` to gaussian and speckle, `density` to salt_pepper; poisson has
/// no parameters.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double mean = 0.0;
    double variance = 0.0;
    double density = 0.0;
    uint64_t seed = 0;

    void validate() const {
        if (variance < 0.0)
            throw std::invalid_argument("NoiseSpec: variance must be >= 0");
        if (density < 0.0 || density > 1.0)
            throw std::invalid_argument("NoiseSpec: density must be in [0, 1]");
    }
};

/// Adds the specified noise to a [0,1] image and clamps the result back to
/// [0, 1]. Deterministic: the same (image, spec) pair always produces
/// bit-identical output.
///
/// Semantics per kind:
///   gaussian     I + n,  n ~ N(mean, variance)
///   salt_pepper  round(density * pixels) distinct pixels set to 0 or 1
///                with probability 1/2 each
///   poisson      k ~ Poisson(255 * I) per pixel, output k / 255
///   speckle      I + I * n,  n ~ N(0, variance)
inline ScalarField add_noise(const ScalarField& image, const NoiseSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    ScalarField out = image;
    const size_t n = out.size();

    auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };

    switch (spec.kind) {
        case NoiseKind::gaussian: {
            if (spec.variance == 0.0) {
                for (size_t i = 0; i < n; ++i) out[i] = clamp01(out[i] + spec.mean);
                break;
            }
            std::normal_distribution<double> dist(spec.mean, std::sqrt(spec.variance));
            for (size_t i = 0; i < n; ++i) out[i] = clamp01(out[i] + dist(rng));
            break;
        }
        case NoiseKind::salt_pepper: {
            const auto k = static_cast<size_t>(std::llround(spec.density * static_cast<double>(n)));
            if (k == 0) break;
            std::vector<size_t> idx(n);
            std::iota(idx.begin(), idx.end(), size_t{0});
            std::vector<size_t> chosen;
            chosen.reserve(k);
            std::sample(idx.begin(), idx.end(), std::back_inserter(chosen), k, rng);
            std::bernoulli_distribution salt(0.5);
            for (size_t i : chosen) out[i] = salt(rng) ? 1.0 : 0.0;
            break;
        }
        case NoiseKind::poisson: {
            for (size_t i = 0; i < n; ++i) {
                double counts = 255.0 * out[i];
                if (counts <= 0.0) {
                    out[i] = 0.0;
                    continue;
                }
                std::poisson_distribution<long> dist(counts);
                out[i] = clamp01(static_cast<double>(dist(rng)) / 255.0);
            }
            break;
        }
        case NoiseKind::speckle: {
            if (spec.variance == 0.0) break;
            std::normal_distribution<double> dist(0.0, std::sqrt(spec.variance));
            for (size_t i = 0; i < n; ++i) out[i] = clamp01(out[i] + out[i] * dist(rng));
            break;
        }
    }
    return out;
}

}  // namespace lsseg
