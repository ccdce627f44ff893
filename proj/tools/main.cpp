// lsseg command line: segmentation runs, synthetic scenes, noise injection,
// and benchmark tables. See README.md for examples.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "lsseg/commands.hpp"

namespace {

struct ParamArgs {
    std::string config_path;
    std::vector<std::string> sets;
};

void add_param_options(CLI::App* cmd, ParamArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key = value parameter file");
    cmd->add_option("--set", args.sets, "override one parameter, e.g. --set alpha=30")
        ->take_all();
}

// defaults -> config file -> --set overrides; also yields the model named in
// the config, if any.
lsseg::ModelParams build_params(const ParamArgs& args, std::string& config_model) {
    lsseg::KeyValues kv;
    if (!args.config_path.empty()) kv = lsseg::load_config(args.config_path);
    for (const std::string& s : args.sets) lsseg::apply_set_expression(kv, s);
    auto it = kv.find("model");
    if (it != kv.end()) config_model = it->second;
    return lsseg::params_from_config(kv, {"model"});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-set image segmentation (hybrid signed-pressure model with CV and "
                 "SBGFRLS baselines)"};
    app.require_subcommand(1);

    // segment
    auto* segment = app.add_subcommand("segment", "segment an image or a named synthetic scene");
    lsseg::SegmentOptions seg_opts;
    ParamArgs seg_params;
    std::string seg_model_flag;
    segment->add_option("--input", seg_opts.input_path, "input image (PGM P5 or grayscale PNG)");
    segment->add_option("--suite", seg_opts.suite, "synthetic scene: single-bias or multi3-bias");
    segment->add_option("--truth", seg_opts.truth_path, "ground truth mask (0/255 image)");
    segment->add_option("--model", seg_model_flag, "hzspf (default), cv, or sbgfrls");
    segment->add_option("--out", seg_opts.output_dir, "output directory")->required();
    segment->add_option("--seed", seg_opts.seed, "scene seed for --suite inputs");
    add_param_options(segment, seg_params);

    // synth
    auto* synth = app.add_subcommand("synth", "render a synthetic scene with ground truth");
    std::string synth_suite, synth_config, synth_out;
    uint64_t synth_seed = 1;
    synth->add_option("--suite", synth_suite, "named scene: single-bias or multi3-bias");
    synth->add_option("--config", synth_config, "scene description file");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", synth_seed, "scene seed");

    // noise
    auto* noise = app.add_subcommand("noise", "inject noise into an image");
    std::string noise_in, noise_out, noise_kind = "gaussian";
    lsseg::NoiseSpec noise_spec;
    noise->add_option("--input", noise_in, "input image")->required();
    noise->add_option("--out", noise_out, "output image (PGM)")->required();
    noise->add_option("--kind", noise_kind, "gaussian, salt_pepper, poisson, or speckle");
    noise->add_option("--mean", noise_spec.mean, "gaussian mean");
    noise->add_option("--variance", noise_spec.variance, "gaussian/speckle variance");
    noise->add_option("--density", noise_spec.density, "salt_pepper density in [0,1]");
    noise->add_option("--seed", noise_spec.seed, "noise seed");

    // bench
    auto* bench = app.add_subcommand("bench", "run a benchmark suite and write a CSV table");
    std::string bench_suite_name, bench_out;
    std::vector<std::string> bench_models = {"hzspf"};
    uint64_t bench_seed = 1;
    ParamArgs bench_params;
    bench->add_option("--suite", bench_suite_name,
                      "single-bias, multi3-bias, noise-sweep, or noise-types")->required();
    bench->add_option("--models", bench_models, "models to run (hzspf cv sbgfrls)")
        ->delimiter(',');
    bench->add_option("--out", bench_out, "output CSV path")->required();
    bench->add_option("--seed", bench_seed, "suite base seed");
    add_param_options(bench, bench_params);

    CLI11_PARSE(app, argc, argv);

    try {
        if (segment->parsed()) {
            std::string config_model;
            seg_opts.params = build_params(seg_params, config_model);
            if (!seg_model_flag.empty()) seg_opts.model = seg_model_flag;
            else if (!config_model.empty()) seg_opts.model = config_model;
            return lsseg::cmd_segment(seg_opts);
        }
        if (synth->parsed()) {
            lsseg::SynthSpec spec;
            if (!synth_suite.empty()) {
                spec = lsseg::named_scene(synth_suite, synth_seed);
            } else if (!synth_config.empty()) {
                spec = lsseg::synth_from_config(lsseg::load_config(synth_config));
                if (synth->count("--seed") > 0) spec.seed = synth_seed;
            } else {
                std::cerr << "error: synth needs --suite or --config\n";
                return 1;
            }
            return lsseg::cmd_synth(spec, synth_out);
        }
        if (noise->parsed()) {
            noise_spec.kind = lsseg::noise_kind_from_string(noise_kind);
            return lsseg::cmd_noise(noise_in, noise_out, noise_spec);
        }
        if (bench->parsed()) {
            std::string config_model;  // ignored: bench picks models via --models
            lsseg::ModelParams params = build_params(bench_params, config_model);
            return lsseg::cmd_bench(bench_suite_name, bench_models, params, bench_seed, bench_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
