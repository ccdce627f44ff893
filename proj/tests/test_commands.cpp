#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsseg/commands.hpp"

using namespace lsseg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "lsseg_cmd_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(CmdSynth, WritesImageAndTruthDeterministically) {
    fs::path a = fresh_dir("synth_a"), b = fresh_dir("synth_b");
    SynthSpec spec = suite_single_bias(3);
    spec.noise = NoiseSpec{NoiseKind::gaussian, 0.0, 0.01, 0.0, 0};
    ASSERT_EQ(cmd_synth(spec, a.string()), 0);
    ASSERT_EQ(cmd_synth(spec, b.string()), 0);
    ASSERT_TRUE(fs::exists(a / "image.pgm"));
    ASSERT_TRUE(fs::exists(a / "truth.pgm"));
    EXPECT_EQ(slurp(a / "image.pgm"), slurp(b / "image.pgm"));
    EXPECT_EQ(slurp(a / "truth.pgm"), slurp(b / "truth.pgm"));

    ScalarField img = load_image((a / "image.pgm").string());
    SegMask truth = load_mask((a / "truth.pgm").string());
    EXPECT_EQ(img.width(), 128);
    EXPECT_EQ(truth.width, 128);
}

TEST(CmdSynth, InvalidSpecFails) {
    std::ostringstream err;
    SynthSpec bad;
    bad.width = 16;
    bad.height = 16;
    bad.shapes = {Shape::disk(8, 8, 3, 2.0)};  // intensity out of range
    EXPECT_EQ(cmd_synth(bad, fresh_dir("synth_bad").string(), err), 1);
    EXPECT_FALSE(err.str().empty());
}

TEST(CmdSegment, ConstantImageConvergesOnFirstIteration) {
    fs::path dir = fresh_dir("seg_const");
    ScalarField img(32, 32, 0.5);
    save_image(img, (dir / "in.pgm").string());

    SegmentOptions opts;
    opts.input_path = (dir / "in.pgm").string();
    opts.output_dir = (dir / "out").string();
    EXPECT_EQ(cmd_segment(opts), 0);

    std::string report = slurp(dir / "out" / "report.csv");
    EXPECT_EQ(report, "iteration,residual\n1,0\n");
    EXPECT_TRUE(fs::exists(dir / "out" / "mask.pgm"));
    EXPECT_TRUE(fs::exists(dir / "out" / "overlay.pgm"));
    EXPECT_TRUE(fs::exists(dir / "out" / "params.cfg"));
    EXPECT_FALSE(fs::exists(dir / "out" / "metrics.csv"));  // no truth given
}

TEST(CmdSegment, SuiteRunWritesMetricsInRange) {
    fs::path dir = fresh_dir("seg_suite");
    SegmentOptions opts;
    opts.suite = "single-bias";
    opts.output_dir = dir.string();
    int status = cmd_segment(opts);
    EXPECT_TRUE(status == 0 || status == 2);

    std::string metrics = slurp(dir / "metrics.csv");
    ASSERT_FALSE(metrics.empty());
    std::istringstream in(metrics);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "dsc,js");
    double dsc = 0, js = 0;
    char comma = 0;
    std::istringstream(row) >> dsc >> comma >> js;
    EXPECT_GE(dsc, 0.0);
    EXPECT_LE(dsc, 1.0);
    EXPECT_GE(js, 0.0);
    EXPECT_LE(js, 1.0);
}

TEST(CmdSegment, ParamsEchoIsReloadable) {
    fs::path dir = fresh_dir("seg_echo");
    SegmentOptions opts;
    opts.suite = "single-bias";
    opts.output_dir = dir.string();
    opts.params.alpha = 22.0;
    ASSERT_NE(cmd_segment(opts), 1);
    KeyValues kv = load_config((dir / "params.cfg").string());
    EXPECT_EQ(kv.at("model"), "hzspf");
    ModelParams p = params_from_config(kv, {"model"});
    EXPECT_DOUBLE_EQ(p.alpha, 22.0);
}

TEST(CmdSegment, MissingInputNamesThePath) {
    std::ostringstream err;
    SegmentOptions opts;
    opts.input_path = "/nonexistent/input.pgm";
    opts.output_dir = fresh_dir("seg_missing").string();
    EXPECT_EQ(cmd_segment(opts, err), 1);
    EXPECT_NE(err.str().find("/nonexistent/input.pgm"), std::string::npos);
}

TEST(CmdSegment, InvalidModelAndParamsNameTheField) {
    std::ostringstream err;
    SegmentOptions opts;
    opts.model = "snake";
    opts.suite = "single-bias";
    opts.output_dir = fresh_dir("seg_badmodel").string();
    EXPECT_EQ(cmd_segment(opts, err), 1);
    EXPECT_NE(err.str().find("model"), std::string::npos);

    std::ostringstream err2;
    SegmentOptions opts2;
    opts2.suite = "single-bias";
    opts2.output_dir = fresh_dir("seg_badalpha").string();
    opts2.params.alpha = -5.0;
    EXPECT_EQ(cmd_segment(opts2, err2), 1);
    EXPECT_NE(err2.str().find("alpha"), std::string::npos);
}

TEST(CmdSegment, OverlayMarksMaskBoundary) {
    ScalarField img(8, 8, 0.0);
    SegMask mask(8, 8);
    for (int y = 2; y <= 5; ++y)
        for (int x = 2; x <= 5; ++x) mask.set(x, y, true);
    ScalarField overlay = make_overlay(img, mask);
    EXPECT_DOUBLE_EQ(overlay.at(2, 2), 1.0);  // boundary
    EXPECT_DOUBLE_EQ(overlay.at(3, 3), 0.0);  // interior, no false 4-neighbor
    EXPECT_DOUBLE_EQ(overlay.at(0, 0), 0.0);  // outside
}

TEST(CmdNoise, RoundTripsThroughFiles) {
    fs::path dir = fresh_dir("noise_cmd");
    ScalarField img(16, 16, 0.5);
    save_image(img, (dir / "in.pgm").string());
    NoiseSpec spec{NoiseKind::salt_pepper, 0.0, 0.0, 0.2, 5};
    ASSERT_EQ(cmd_noise((dir / "in.pgm").string(), (dir / "out.pgm").string(), spec), 0);
    ScalarField out = load_image((dir / "out.pgm").string());
    size_t changed = 0;
    for (size_t i = 0; i < out.size(); ++i) changed += out[i] != img[i];
    EXPECT_GT(changed, 0u);
    EXPECT_LE(changed, static_cast<size_t>(std::ceil(0.2 * 256)));

    std::ostringstream err;
    EXPECT_EQ(cmd_noise("/nonexistent.pgm", (dir / "x.pgm").string(), spec, err), 1);
}

TEST(CmdBench, RowStructurePerSuite) {
    ModelParams p;
    std::vector<BenchRow> rows = run_bench("single-bias", {"hzspf", "cv", "sbgfrls"}, p, 1);
    ASSERT_EQ(rows.size(), 3u);  // one case x three models, sorted by model
    EXPECT_EQ(rows[0].model, "cv");
    EXPECT_EQ(rows[1].model, "hzspf");
    EXPECT_EQ(rows[2].model, "sbgfrls");
    for (const BenchRow& r : rows) {
        EXPECT_GE(r.dsc, 0.0);
        EXPECT_LE(r.dsc, 1.0);
        EXPECT_GE(r.iterations, 1);
    }

    std::vector<BenchRow> sweep = run_bench("noise-sweep", {"hzspf"}, p, 1);
    ASSERT_EQ(sweep.size(), 4u);
    EXPECT_EQ(sweep[0].case_name, "gaussian-0.01");
    EXPECT_EQ(sweep[3].case_name, "gaussian-0.04");

    std::vector<BenchRow> types = run_bench("noise-types", {"hzspf"}, p, 1);
    ASSERT_EQ(types.size(), 4u);
}

TEST(CmdBench, CsvSchemaAndErrors) {
    fs::path dir = fresh_dir("bench_csv");
    ModelParams p;
    p.max_iter = 5;  // smoke-level run
    std::string csv_path = (dir / "out.csv").string();
    ASSERT_EQ(cmd_bench("single-bias", {"hzspf"}, p, 1, csv_path), 0);
    std::string csv = slurp(csv_path);
    EXPECT_EQ(csv.rfind("case,model,dsc,js,iterations,seconds\n", 0), 0u);
    EXPECT_NE(csv.find("single-bias,hzspf,"), std::string::npos);
    EXPECT_EQ(csv.find("\r"), std::string::npos);  // LF only

    std::ostringstream err;
    EXPECT_EQ(cmd_bench("nope", {"hzspf"}, p, 1, csv_path, err), 1);
    std::ostringstream err2;
    EXPECT_EQ(cmd_bench("single-bias", {"hzspf", "resnet"}, p, 1, csv_path, err2), 1);
    EXPECT_NE(err2.str().find("resnet"), std::string::npos);
}
