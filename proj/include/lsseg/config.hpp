#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsseg/evolve.hpp"
#include "lsseg/synth.hpp"

namespace lsseg {

/// Flat "key = value" text config. '#' starts a comment, blank lines are
/// skipped. Unknown keys are hard errors at apply time, so typos in
/// experiment configs fail loudly instead of silently using a default.
using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad integer value for '" + key + "': " + value);
    }
}

inline uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad seed value for '" + key + "': " + value);
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw std::invalid_argument("config: bad boolean value for '" + key + "': " + value);
}

}  // namespace detail

inline KeyValues parse_config_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value': " + line);
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

inline KeyValues load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Parses a single "key=value" token (the --set form) into a map entry.
inline void apply_set_expression(KeyValues& kv, const std::string& expr) {
    auto eq = expr.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got: " + expr);
    std::string key = detail::trim(expr.substr(0, eq));
    std::string value = detail::trim(expr.substr(eq + 1));
    if (key.empty())
        throw std::invalid_argument("--set expects key=value, got: " + expr);
    kv[key] = value;
}

/// Applies one model-parameter key. Returns false for keys that do not
/// belong to ModelParams (the caller decides whether that is an error).
inline bool apply_param_key(ModelParams& p, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;

    if (key == "alpha") p.alpha = parse_double(key, value);
    else if (key == "w") p.w = parse_double(key, value);
    else if (key == "epsilon") p.epsilon = parse_double(key, value);
    else if (key == "sigma_fit") p.sigma_fit = parse_double(key, value);
    else if (key == "radius_fit") p.radius_fit = parse_int(key, value);
    else if (key == "sigma_reg") p.sigma_reg = parse_double(key, value);
    else if (key == "dt") p.dt = parse_double(key, value);
    else if (key == "eta") p.eta = parse_double(key, value);
    else if (key == "conv_T") p.conv_T = parse_double(key, value);
    else if (key == "max_iter") p.max_iter = parse_int(key, value);
    else if (key == "binary_step") p.binary_step = parse_bool(key, value);
    else if (key == "c0") p.c0 = parse_double(key, value);
    else if (key == "lambda1") p.lambda1 = parse_double(key, value);
    else if (key == "lambda2") p.lambda2 = parse_double(key, value);
    else if (key == "mu_cv") p.mu_cv = parse_double(key, value);
    else if (key == "mu") p.mu = parse_double(key, value);
    else if (key == "nu") p.nu = parse_double(key, value);
    else if (key == "init.kind") {
        InitShape s = p.init ? *p.init : InitShape{};
        if (value == "rectangle") s.kind = InitShape::Kind::rectangle;
        else if (value == "circle") s.kind = InitShape::Kind::circle;
        else throw std::invalid_argument("config: init.kind must be rectangle or circle");
        p.init = s;
    } else if (key == "init.x0" || key == "init.y0" || key == "init.x1" || key == "init.y1" ||
               key == "init.cx" || key == "init.cy" || key == "init.r") {
        InitShape s = p.init ? *p.init : InitShape{};
        double v = parse_double(key, value);
        if (key == "init.x0") s.x0 = v;
        else if (key == "init.y0") s.y0 = v;
        else if (key == "init.x1") s.x1 = v;
        else if (key == "init.y1") s.y1 = v;
        else if (key == "init.cx") s.cx = v;
        else if (key == "init.cy") s.cy = v;
        else s.r = v;
        p.init = s;
    } else {
        return false;
    }
    return true;
}

/// Builds ModelParams from a key-value map; every key must be a known
/// parameter. Keys listed in `consumed_elsewhere` are skipped.
inline ModelParams params_from_config(const KeyValues& kv,
                                      const std::vector<std::string>& consumed_elsewhere = {}) {
    ModelParams p;
    for (const auto& [key, value] : kv) {
        bool skip = false;
        for (const auto& c : consumed_elsewhere)
            if (key == c) { skip = true; break; }
        if (skip) continue;
        if (!apply_param_key(p, key, value))
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return p;
}

/// Serializes the full effective parameter set, defaults included, in the
/// same config format (a run echo is reloadable with --config).
inline std::string params_to_config(const ModelParams& p, const std::string& model,
                                    int width = 0, int height = 0) {
    std::ostringstream out;
    out.precision(17);
    out << "model = " << model << "\n";
    out << "alpha = " << p.alpha << "\n";
    out << "w = " << p.w << "\n";
    out << "epsilon = " << p.epsilon << "\n";
    out << "sigma_fit = " << p.sigma_fit << "\n";
    out << "radius_fit = " << p.radius_fit << "\n";
    out << "sigma_reg = " << p.sigma_reg << "\n";
    out << "dt = " << p.dt << "\n";
    out << "eta = " << p.eta << "\n";
    out << "conv_T = " << p.conv_T << "\n";
    out << "max_iter = " << p.max_iter << "\n";
    out << "binary_step = " << (p.binary_step ? "true" : "false") << "\n";
    out << "c0 = " << p.c0 << "\n";
    out << "lambda1 = " << p.lambda1 << "\n";
    out << "lambda2 = " << p.lambda2 << "\n";
    out << "mu_cv = " << p.mu_cv << "\n";
    out << "mu = " << p.mu << "\n";
    out << "nu = " << p.nu << "\n";
    InitShape init = p.init ? *p.init
                            : (width > 0 ? InitShape::default_for(width, height) : InitShape{});
    if (p.init || width > 0) {
        if (init.kind == InitShape::Kind::rectangle) {
            out << "init.kind = rectangle\n";
            out << "init.x0 = " << init.x0 << "\n";
            out << "init.y0 = " << init.y0 << "\n";
            out << "init.x1 = " << init.x1 << "\n";
            out << "init.y1 = " << init.y1 << "\n";
        } else {
            out << "init.kind = circle\n";
            out << "init.cx = " << init.cx << "\n";
            out << "init.cy = " << init.cy << "\n";
            out << "init.r = " << init.r << "\n";
        }
    }
    return out.str();
}

/// Builds a SynthSpec from config keys: width, height, background,
/// bias.kind, bias.amplitude, noise.*, seed, and indexed shapes
/// shape.N.kind / cx / cy / radius / half_w / half_h / intensity.
inline SynthSpec synth_from_config(const KeyValues& kv) {
    SynthSpec spec;
    spec.width = 0;  // force explicit dimensions
    spec.height = 0;

    std::map<int, Shape> shapes;
    std::map<int, std::string> shape_kinds;
    bool have_noise = false;
    NoiseSpec noise;

    for (const auto& [key, value] : kv) {
        if (key == "width") spec.width = detail::parse_int(key, value);
        else if (key == "height") spec.height = detail::parse_int(key, value);
        else if (key == "background") spec.background_intensity = detail::parse_double(key, value);
        else if (key == "seed") spec.seed = detail::parse_u64(key, value);
        else if (key == "bias.kind") {
            if (value == "none") spec.bias.kind = BiasSpec::Kind::none;
            else if (value == "linear") spec.bias.kind = BiasSpec::Kind::linear;
            else if (value == "radial") spec.bias.kind = BiasSpec::Kind::radial;
            else throw std::invalid_argument("config: bias.kind must be none|linear|radial");
        } else if (key == "bias.amplitude") {
            spec.bias.amplitude = detail::parse_double(key, value);
        } else if (key == "noise.kind") {
            noise.kind = noise_kind_from_string(value);
            have_noise = true;
        } else if (key == "noise.mean") {
            noise.mean = detail::parse_double(key, value);
            have_noise = true;
        } else if (key == "noise.variance") {
            noise.variance = detail::parse_double(key, value);
            have_noise = true;
        } else if (key == "noise.density") {
            noise.density = detail::parse_double(key, value);
            have_noise = true;
        } else if (key.rfind("shape.", 0) == 0) {
            auto rest = key.substr(6);
            auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw std::invalid_argument("config: malformed shape key '" + key + "'");
            int idx = detail::parse_int(key, rest.substr(0, dot));
            std::string field = rest.substr(dot + 1);
            Shape& s = shapes[idx];
            if (field == "kind") shape_kinds[idx] = value;
            else if (field == "cx") s.cx = detail::parse_double(key, value);
            else if (field == "cy") s.cy = detail::parse_double(key, value);
            else if (field == "radius") s.a = detail::parse_double(key, value);
            else if (field == "half_w") s.a = detail::parse_double(key, value);
            else if (field == "half_h") s.b = detail::parse_double(key, value);
            else if (field == "intensity") s.intensity = detail::parse_double(key, value);
            else throw std::invalid_argument("config: unknown shape field '" + key + "'");
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }

    if (spec.width == 0 || spec.height == 0)
        throw std::invalid_argument("config: synth spec needs explicit width and height");

    for (auto& [idx, s] : shapes) {
        auto it = shape_kinds.find(idx);
        if (it == shape_kinds.end())
            throw std::invalid_argument("config: shape." + std::to_string(idx) + " missing kind");
        if (it->second == "disk") {
            s.kind = Shape::Kind::disk;
            s.b = s.a;
        } else if (it->second == "rectangle") {
            s.kind = Shape::Kind::rectangle;
        } else {
            throw std::invalid_argument("config: shape kind must be disk or rectangle");
        }
        spec.shapes.push_back(s);
    }
    if (have_noise) spec.noise = noise;
    return spec;
}

}  // namespace lsseg
