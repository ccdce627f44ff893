#pragma once

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsseg/field.hpp"

namespace lsseg {

namespace detail {

// Skips PNM whitespace and '#' comment lines, then reads one decimal token.
inline int read_pnm_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw std::runtime_error("malformed PGM header: " + path);
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1000000000L)
            throw std::runtime_error("malformed PGM header: " + path);
        c = in.get();
    }
    if (c != EOF) in.unget();
    return static_cast<int>(value);
}

inline ScalarField load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image file: " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P')
        throw std::runtime_error("unsupported image format (not PNM): " + path);
    if (m1 == '3' || m1 == '6')
        throw std::runtime_error("color image rejected (use grayscale): " + path);
    if (m1 != '5')
        throw std::runtime_error("unsupported PNM variant (only binary P5 supported): " + path);

    int w = read_pnm_int(in, path);
    int h = read_pnm_int(in, path);
    int maxval = read_pnm_int(in, path);
    if (maxval != 255)
        throw std::runtime_error("unsupported PGM maxval " + std::to_string(maxval) +
                                 " (only 8-bit, maxval 255): " + path);
    if (w < 3 || h < 3)
        throw std::runtime_error("image too small (minimum 3x3): " + path);
    in.get();  // single whitespace byte after maxval

    std::vector<unsigned char> raw(static_cast<size_t>(w) * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        throw std::runtime_error("truncated PGM pixel data: " + path);

    ScalarField f(w, h);
    for (size_t i = 0; i < raw.size(); ++i)
        f[i] = raw[i] / 255.0;
    return f;
}

inline ScalarField load_png(const std::string& path) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        std::string msg = img.message;
        png_image_free(&img);
        throw std::runtime_error("cannot read PNG '" + path + "': " + msg);
    }
    if (img.format & PNG_FORMAT_FLAG_COLOR) {
        png_image_free(&img);
        throw std::runtime_error("color image rejected (use grayscale): " + path);
    }
    if (img.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&img);
        throw std::runtime_error("16-bit PNG not supported (8-bit grayscale only): " + path);
    }
    if (img.width < 3 || img.height < 3) {
        png_image_free(&img);
        throw std::runtime_error("image too small (minimum 3x3): " + path);
    }
    img.format = PNG_FORMAT_GRAY;
    std::vector<unsigned char> raw(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, raw.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw std::runtime_error("cannot decode PNG '" + path + "': " + msg);
    }
    ScalarField f(static_cast<int>(img.width), static_cast<int>(img.height));
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = raw[i] / 255.0;
    return f;
}

inline bool has_png_magic(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

}  // namespace detail

/// Loads an 8-bit grayscale image (binary PGM "P5" or grayscale PNG) and
/// normalizes intensities to [0, 1] by dividing by 255. Color inputs are
/// rejected rather than converted.
inline ScalarField load_image(const std::string& path) {
    if (detail::has_png_magic(path))
        return detail::load_png(path);
    return detail::load_pgm(path);
}

/// Writes the field as binary PGM (P5, maxval 255). Values are clamped to
/// [0, 1] and mapped with round-half-up to 0..255, so a [0,1] field
/// round-trips through save/load within 1/255 per pixel.
inline void save_image(const ScalarField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << "P5\n" << field.width() << " " << field.height() << "\n255\n";
    std::vector<unsigned char> raw(field.size());
    for (size_t i = 0; i < field.size(); ++i) {
        double v = field[i];
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        raw[i] = static_cast<unsigned char>(std::floor(v * 255.0 + 0.5));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out)
        throw std::runtime_error("failed writing image: " + path);
}

/// Writes a mask as a 0/255 PGM.
inline void save_mask(const SegMask& mask, const std::string& path) {
    ScalarField f(mask.width, mask.height);
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = mask.bits[i] ? 1.0 : 0.0;
    save_image(f, path);
}

/// Loads a 0/255 PGM back into a mask (any value >= 128 counts as true).
inline SegMask load_mask(const std::string& path) {
    ScalarField f = load_image(path);
    SegMask m(f.width(), f.height());
    for (size_t i = 0; i < f.size(); ++i)
        m.bits[i] = f[i] >= 0.5 ? 1 : 0;
    return m;
}

}  // namespace lsseg
