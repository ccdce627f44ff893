#pragma once

#include <stdexcept>

#include "lsseg/field.hpp"

namespace lsseg {

/// Dice and Jaccard overlap scores; js <= dsc always, dsc = 2 js / (1 + js).
struct MetricPair {
    double dsc = 0.0;
    double js = 0.0;
};

/// Exact pixel-count Dice 2|A^B| / (|A| + |B|) and Jaccard |A^B| / |AuB|.
/// Two empty masks agree perfectly (1); one empty mask scores 0.
inline MetricPair evaluate(const SegMask& pred, const SegMask& truth) {
    if (!pred.same_dims(truth))
        throw std::invalid_argument("evaluate: mask dimensions differ");
    size_t n_pred = 0, n_truth = 0, n_both = 0;
    for (size_t i = 0; i < pred.bits.size(); ++i) {
        bool a = pred.bits[i] != 0;
        bool b = truth.bits[i] != 0;
        n_pred += a;
        n_truth += b;
        n_both += a && b;
    }
    if (n_pred == 0 && n_truth == 0) return {1.0, 1.0};
    if (n_pred == 0 || n_truth == 0) return {0.0, 0.0};
    MetricPair mp;
    mp.dsc = 2.0 * static_cast<double>(n_both) / static_cast<double>(n_pred + n_truth);
    mp.js = static_cast<double>(n_both) / static_cast<double>(n_pred + n_truth - n_both);
    return mp;
}

}  // namespace lsseg
