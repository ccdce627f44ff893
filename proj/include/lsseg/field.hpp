#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lsseg {

/// Dense 2-D grid of doubles in row-major order. Used for images, level set
/// functions and every derived field. Minimum size 3x3 so that central
/// differences always have interior points.
class ScalarField {
public:
    ScalarField() = default;

    ScalarField(int width, int height, double fill = 0.0)
        : width_(width), height_(height) {
        check_dims(width, height);
        v_.assign(static_cast<size_t>(width) * height, fill);
    }

    ScalarField(int width, int height, std::vector<double> values)
        : width_(width), height_(height), v_(std::move(values)) {
        check_dims(width, height);
        if (v_.size() != static_cast<size_t>(width) * height)
            throw std::invalid_argument("ScalarField: values size does not match dimensions");
        for (double x : v_)
            if (!std::isfinite(x))
                throw std::invalid_argument("ScalarField: non-finite value");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return v_.size(); }

    double& at(int x, int y) { return v_[static_cast<size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return v_[static_cast<size_t>(y) * width_ + x]; }

    double& operator[](size_t i) { return v_[i]; }
    double operator[](size_t i) const { return v_[i]; }

    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    bool same_dims(const ScalarField& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    double min() const {
        double m = v_[0];
        for (double x : v_) m = x < m ? x : m;
        return m;
    }

    double max() const {
        double m = v_[0];
        for (double x : v_) m = x > m ? x : m;
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) {
            double a = std::fabs(x);
            m = a > m ? a : m;
        }
        return m;
    }

    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

private:
    static void check_dims(int width, int height) {
        if (width < 3 || height < 3)
            throw std::invalid_argument("ScalarField: dimensions must be at least 3x3, got " +
                                        std::to_string(width) + "x" + std::to_string(height));
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> v_;
};

/// Binary segmentation mask, true = object/inside.
struct SegMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;  // 0 or 1, row-major

    SegMask() = default;
    SegMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

    bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }

    size_t count() const {
        size_t n = 0;
        for (uint8_t b : bits) n += b;
        return n;
    }

    bool same_dims(const SegMask& other) const {
        return width == other.width && height == other.height;
    }
};

/// Inside region of a level set: bit set iff phi >= 0. The zero level set is
/// counted as inside.
inline SegMask mask_from_phi(const ScalarField& phi) {
    SegMask m(phi.width(), phi.height());
    for (size_t i = 0; i < phi.size(); ++i)
        m.bits[i] = phi[i] >= 0.0 ? 1 : 0;
    return m;
}

}  // namespace lsseg
