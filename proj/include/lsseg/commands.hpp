#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lsseg/config.hpp"
#include "lsseg/evolve.hpp"
#include "lsseg/image_io.hpp"
#include "lsseg/metrics.hpp"
#include "lsseg/noise.hpp"
#include "lsseg/synth.hpp"

namespace lsseg {

/// Real numbers in CSV output carry 6 significant digits.
inline std::string fmt_real(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Boundary overlay: the input image with every mask pixel that has a
/// false 4-neighbor painted white.
inline ScalarField make_overlay(const ScalarField& image, const SegMask& mask) {
    ScalarField out = image;
    const int w = mask.width, h = mask.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            bool boundary = (x > 0 && !mask.at(x - 1, y)) || (x + 1 < w && !mask.at(x + 1, y)) ||
                            (y > 0 && !mask.at(x, y - 1)) || (y + 1 < h && !mask.at(x, y + 1));
            if (boundary) out.at(x, y) = 1.0;
        }
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << text;
}

struct SegmentOptions {
    std::string model = "hzspf";
    ModelParams params;
    std::string input_path;   // image file; empty when a suite scene is used
    std::string suite;        // named synthetic scene (single-bias, multi3-bias)
    std::string truth_path;   // optional ground truth mask (0/255 image)
    std::string output_dir = ".";
    uint64_t seed = 1;        // scene seed when suite input is used
};

inline RunResult run_model(const std::string& model, const ScalarField& image,
                           const ModelParams& params, const RunHooks& hooks = {}) {
    if (model == "hzspf") return run_hzspf(image, params, hooks);
    if (model == "cv") return run_cv(image, params, hooks);
    if (model == "sbgfrls") return run_sbgfrls(image, params, hooks);
    throw std::invalid_argument("model: must be one of hzspf, cv, sbgfrls (got '" + model + "')");
}

/// Runs one segmentation and writes mask.pgm, overlay.pgm, report.csv,
/// params.cfg, and metrics.csv when ground truth is available.
/// Exit status: 0 converged, 2 stopped at max_iter, 1 error.
inline int cmd_segment(const SegmentOptions& opts, std::ostream& err = std::cerr) {
    try {
        if (opts.model != "hzspf" && opts.model != "cv" && opts.model != "sbgfrls")
            throw std::invalid_argument("model: must be one of hzspf, cv, sbgfrls (got '" +
                                        opts.model + "')");
        if (opts.input_path.empty() && opts.suite.empty())
            throw std::invalid_argument("input: an image path or a suite scene is required");
        opts.params.validate();

        ScalarField image(3, 3);
        std::optional<SegMask> truth;
        std::optional<uint64_t> used_seed;
        if (!opts.suite.empty()) {
            SynthSpec spec = named_scene(opts.suite, opts.seed);
            SynthResult sr = generate(spec);
            image = std::move(sr.image);
            truth = std::move(sr.truth);
            used_seed = opts.seed;
        } else {
            image = load_image(opts.input_path);
            if (!opts.truth_path.empty()) truth = load_mask(opts.truth_path);
        }

        std::filesystem::create_directories(opts.output_dir);
        const std::filesystem::path dir(opts.output_dir);

        RunResult res = run_model(opts.model, image, opts.params);
        res.report.seed = used_seed;

        SegMask mask = mask_from_phi(res.phi);
        save_mask(mask, (dir / "mask.pgm").string());
        save_image(make_overlay(image, mask), (dir / "overlay.pgm").string());

        std::string report_csv = "iteration,residual\n";
        for (int i = 0; i < res.report.iterations; ++i)
            report_csv += std::to_string(i + 1) + "," +
                          fmt_real(res.report.residuals[static_cast<size_t>(i)]) + "\n";
        write_text_file((dir / "report.csv").string(), report_csv);

        std::string echo = params_to_config(opts.params, opts.model, image.width(), image.height());
        if (used_seed) echo += "# scene seed = " + std::to_string(*used_seed) + "\n";
        write_text_file((dir / "params.cfg").string(), echo);

        if (truth) {
            MetricPair mp = evaluate(mask, *truth);
            write_text_file((dir / "metrics.csv").string(),
                            "dsc,js\n" + fmt_real(mp.dsc) + "," + fmt_real(mp.js) + "\n");
        }
        return res.report.converged ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

/// Renders a synthetic scene to image.pgm and truth.pgm (0/255).
inline int cmd_synth(const SynthSpec& spec, const std::string& output_dir,
                     std::ostream& err = std::cerr) {
    try {
        SynthResult sr = generate(spec);
        std::filesystem::create_directories(output_dir);
        const std::filesystem::path dir(output_dir);
        save_image(sr.image, (dir / "image.pgm").string());
        save_mask(sr.truth, (dir / "truth.pgm").string());
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

/// Applies one noise injection to an image file.
inline int cmd_noise(const std::string& input_path, const std::string& output_path,
                     const NoiseSpec& spec, std::ostream& err = std::cerr) {
    try {
        ScalarField image = load_image(input_path);
        save_image(add_noise(image, spec), output_path);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

struct BenchRow {
    std::string case_name;
    std::string model;
    double dsc = 0.0;
    double js = 0.0;
    int iterations = 0;
    double seconds = 0.0;
};

/// Runs every (case, model) pair of a named suite. Rows are sorted by
/// (case, model); given the same seed the segmentation content of the CSV
/// is reproducible byte for byte (wall time is the one measured field).
inline std::vector<BenchRow> run_bench(const std::string& suite,
                                       const std::vector<std::string>& models,
                                       const ModelParams& params, uint64_t seed) {
    std::vector<BenchRow> rows;
    for (const BenchCase& bc : bench_suite(suite, seed)) {
        SynthResult sr = generate(bc.spec);
        for (const std::string& model : models) {
            RunResult res = run_model(model, sr.image, params);
            MetricPair mp = evaluate(mask_from_phi(res.phi), sr.truth);
            rows.push_back({bc.name, model, mp.dsc, mp.js, res.report.iterations,
                            res.report.wall_seconds});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return a.case_name != b.case_name ? a.case_name < b.case_name : a.model < b.model;
    });
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string csv = "case,model,dsc,js,iterations,seconds\n";
    for (const BenchRow& r : rows)
        csv += r.case_name + "," + r.model + "," + fmt_real(r.dsc) + "," + fmt_real(r.js) + "," +
               std::to_string(r.iterations) + "," + fmt_real(r.seconds) + "\n";
    return csv;
}

inline int cmd_bench(const std::string& suite, const std::vector<std::string>& models,
                     const ModelParams& params, uint64_t seed, const std::string& output_path,
                     std::ostream& err = std::cerr) {
    try {
        for (const std::string& m : models)
            if (m != "hzspf" && m != "cv" && m != "sbgfrls")
                throw std::invalid_argument("model: must be one of hzspf, cv, sbgfrls (got '" +
                                            m + "')");
        std::vector<BenchRow> rows = run_bench(suite, models, params, seed);
        write_text_file(output_path, bench_csv(rows));
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lsseg
