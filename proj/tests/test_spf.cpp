#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lsseg/spf.hpp"
#include "test_util.hpp"

using namespace lsseg;

namespace {

RegionStats stats(double c1, double c2, double m) {
    RegionStats s;
    s.c1 = c1;
    s.c2 = c2;
    s.m = m;
    return s;
}

}  // namespace

TEST(SpfSbgfrls, ConstantImageGivesZeroField) {
    ScalarField img(6, 6, 0.7);
    SpfField f = spf_sbgfrls(img, stats(0.7, 0.7, 0.7));
    for (size_t i = 0; i < f.values.size(); ++i) EXPECT_DOUBLE_EQ(f.values[i], 0.0);
    EXPECT_EQ(f.kind, SpfKind::sbgfrls);
}

TEST(SpfSbgfrls, BinaryImageMapsToPlusMinusOne) {
    ScalarField img(4, 4, 0.0);
    for (int x = 0; x < 4; ++x) img.at(x, 0) = 1.0;
    SpfField f = spf_sbgfrls(img, stats(1.0, 0.0, 1.0));
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            EXPECT_DOUBLE_EQ(f.values.at(x, y), y == 0 ? 1.0 : -1.0);
}

TEST(SpfSbgfrls, DegenerateStatsRejected) {
    ScalarField img(4, 4, 0.5);
    RegionStats s = stats(0.5, 0.5, 0.5);
    s.inside_empty = true;
    EXPECT_THROW(spf_sbgfrls(img, s), std::invalid_argument);
    EXPECT_THROW(spf_global(img, s), std::invalid_argument);
}

TEST(SpfNormalization, MaxAbsIsOneUnlessZero) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField img = testutil::random_field(12, 12, rng);
        ScalarField phi = testutil::random_field(12, 12, rng, -1.0, 1.0);
        RegionStats s = region_stats(img, phi);
        for (const SpfField& f : {spf_sbgfrls(img, s), spf_global(img, s)}) {
            double mx = f.values.max_abs();
            bool all_zero = mx == 0.0;
            if (!all_zero) EXPECT_NEAR(mx, 1.0, 1e-12);
            for (size_t i = 0; i < f.values.size(); ++i) {
                EXPECT_GE(f.values[i], -1.0 - 1e-15);
                EXPECT_LE(f.values[i], 1.0 + 1e-15);
            }
        }
    }
}

TEST(GlobalThreshold, HandWorkedExample) {
    // c1 = 0.8, c2 = 0.2, m = 0.8: ((0.8-1.6)^2 - 0.04) / (2*0.6) = 0.5
    GlobalThreshold t = global_threshold(stats(0.8, 0.2, 0.8));
    EXPECT_FALSE(t.fell_back);
    EXPECT_NEAR(t.value, 0.5, 1e-15);
}

TEST(GlobalThreshold, ReducesToMidpointWhenMedianEqualsInnerMean) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double c1 = uni(rng), c2 = uni(rng);
        if (c1 == c2) continue;
        GlobalThreshold t = global_threshold(stats(c1, c2, c1));
        EXPECT_NEAR(t.value, 0.5 * (c1 + c2), 1e-12);
    }
}

TEST(GlobalThreshold, CollapsedMeansFallBack) {
    GlobalThreshold t = global_threshold(stats(0.4, 0.4, 0.9));
    EXPECT_TRUE(t.fell_back);
    EXPECT_DOUBLE_EQ(t.value, 0.4);
}

TEST(SpfGlobal, EqualsSbgfrlsWhenMedianEqualsInnerMean) {
    std::mt19937_64 rng(23);
    ScalarField img = testutil::random_field(16, 16, rng);
    ScalarField phi = testutil::random_field(16, 16, rng, -1.0, 1.0);
    RegionStats s = region_stats(img, phi);
    s.m = s.c1;
    SpfField g = spf_global(img, s);
    SpfField z = spf_sbgfrls(img, s);
    EXPECT_LT(testutil::max_abs_diff(g.values, z.values), 1e-12);
}

TEST(SpfGlobal, MatchesScalarReEvaluation) {
    std::mt19937_64 rng(24);
    ScalarField img = testutil::random_field(16, 16, rng);
    ScalarField phi = testutil::random_field(16, 16, rng, -1.0, 1.0);
    RegionStats s = region_stats(img, phi);
    SpfField g = spf_global(img, s);

    double thr = ((s.c1 - 2.0 * s.m) * (s.c1 - 2.0 * s.m) - s.c2 * s.c2) /
                 (2.0 * (s.c1 - s.c2));
    double mx = 0.0;
    for (size_t i = 0; i < img.size(); ++i) mx = std::max(mx, std::fabs(img[i] - thr));
    for (size_t i = 0; i < img.size(); ++i)
        EXPECT_NEAR(g.values[i], (img[i] - thr) / mx, 1e-12);
}

TEST(SpfGlobal, ConstantImageAfterFallbackIsZeroField) {
    ScalarField img(5, 5, 0.3);
    SpfField g = spf_global(img, stats(0.3, 0.3, 0.3));
    for (size_t i = 0; i < g.values.size(); ++i) EXPECT_DOUBLE_EQ(g.values[i], 0.0);
}

TEST(SpfGlobal, SignsOnCrispTwoPhaseImage) {
    // object rows at 0.8, background rows at 0.2, contour strictly inside
    // the object: positive pressure on the object, negative on background
    ScalarField img(16, 16, 0.2);
    ScalarField phi(16, 16, -1.0);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 16; ++x) img.at(x, y) = 0.8;
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 16; ++x) phi.at(x, y) = 1.0;

    RegionStats s = region_stats(img, phi);
    EXPECT_DOUBLE_EQ(s.c1, 0.8);
    EXPECT_DOUBLE_EQ(s.m, 0.8);
    SpfField g = spf_global(img, s);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            if (y < 8) EXPECT_GT(g.values.at(x, y), 0.0);
            else EXPECT_LT(g.values.at(x, y), 0.0);
        }
}

TEST(SpfLocal, EqualEnergiesGiveZeroField) {
    ScalarField e(6, 6, 0.4);
    SpfField f = spf_local(e, e);
    for (size_t i = 0; i < f.values.size(); ++i) EXPECT_DOUBLE_EQ(f.values[i], 0.0);
    EXPECT_EQ(f.kind, SpfKind::local);
}

TEST(SpfLocal, NormalizationArithmetic) {
    ScalarField e1(3, 3, 0.0), e2(3, 3, 0.0);
    e2[0] = 2.0;   // difference  2
    e1[1] = 1.0;   // difference -1
    SpfField f = spf_local(e1, e2);
    EXPECT_DOUBLE_EQ(f.values[0], 1.0);
    EXPECT_DOUBLE_EQ(f.values[1], -0.5);
    EXPECT_DOUBLE_EQ(f.values[2], 0.0);
}

TEST(SpfLocal, ConstantImagePipelineGivesZeroField) {
    GaussianKernel k = make_kernel(3.0, 9);
    ScalarField img(12, 12, 0.5);
    std::mt19937_64 rng(25);
    ScalarField phi = testutil::random_field(12, 12, rng, -2.0, 2.0);
    LocalFields lf = local_fit(img, phi, k, 1.0);
    local_energies(img, phi, lf, k, 1.0);
    SpfField l = spf_local(lf.e1, lf.e2);
    for (size_t i = 0; i < l.values.size(); ++i) EXPECT_DOUBLE_EQ(l.values[i], 0.0);
}

TEST(SpfLocal, SignMatchesBruteForceEnergyDifference) {
    // crisp two-phase configuration; at every pixel the local pressure sign
    // equals the sign of the oracle energy difference e2 - e1
    GaussianKernel k = make_kernel(2.0, 4);
    const double eps = 1.0;
    ScalarField img(16, 16, 0.2);
    ScalarField phi(16, 16, -1.0);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            if (x < 8) img.at(x, y) = 0.8;
            if (x < 5) phi.at(x, y) = 1.0;  // contour strictly inside object
        }
    LocalFields lf = local_fit(img, phi, k, eps);
    local_energies(img, phi, lf, k, eps);
    SpfField l = spf_local(lf.e1, lf.e2);

    ScalarField e1o = testutil::local_energy_oracle(img, phi, lf.f1, k, eps, true);
    ScalarField e2o = testutil::local_energy_oracle(img, phi, lf.f2, k, eps, false);
    for (size_t i = 0; i < img.size(); ++i) {
        double oracle = e2o[i] - e1o[i];
        if (std::fabs(oracle) > 1e-12)
            EXPECT_GT(l.values[i] * oracle, 0.0) << "pixel " << i;
    }
}

TEST(SpfHybrid, EndpointsAreExact) {
    std::mt19937_64 rng(26);
    SpfField g{testutil::random_field(8, 8, rng, -1.0, 1.0), SpfKind::global};
    SpfField l{testutil::random_field(8, 8, rng, -1.0, 1.0), SpfKind::local};
    SpfField at1 = spf_hybrid(g, l, 1.0);
    SpfField at0 = spf_hybrid(g, l, 0.0);
    EXPECT_EQ(at1.kind, SpfKind::hybrid);
    for (size_t i = 0; i < g.values.size(); ++i) {
        EXPECT_DOUBLE_EQ(at1.values[i], g.values[i]);
        EXPECT_DOUBLE_EQ(at0.values[i], l.values[i]);
    }
}

TEST(SpfHybrid, MidpointArithmeticAndLinearity) {
    SpfField g{ScalarField(3, 3, 1.0), SpfKind::global};
    SpfField l{ScalarField(3, 3, -1.0), SpfKind::local};
    SpfField mid = spf_hybrid(g, l, 0.5);
    for (size_t i = 0; i < mid.values.size(); ++i) EXPECT_DOUBLE_EQ(mid.values[i], 0.0);

    std::mt19937_64 rng(27);
    SpfField gr{testutil::random_field(6, 6, rng, -1.0, 1.0), SpfKind::global};
    SpfField lr{testutil::random_field(6, 6, rng, -1.0, 1.0), SpfKind::local};
    for (double w : {0.25, 0.5, 0.75}) {
        SpfField hz = spf_hybrid(gr, lr, w);
        for (size_t i = 0; i < hz.values.size(); ++i)
            EXPECT_NEAR(hz.values[i], w * gr.values[i] + (1.0 - w) * lr.values[i], 1e-15);
    }
}

TEST(SpfHybrid, RejectsBadInputs) {
    SpfField g{ScalarField(3, 3, 0.0), SpfKind::global};
    SpfField l{ScalarField(3, 3, 0.0), SpfKind::local};
    EXPECT_THROW(spf_hybrid(g, l, 1.5), std::invalid_argument);
    EXPECT_THROW(spf_hybrid(g, l, -0.1), std::invalid_argument);
    EXPECT_THROW(spf_hybrid(l, g, 0.5), std::invalid_argument);  // kinds swapped
    SpfField wrong{ScalarField(4, 3, 0.0), SpfKind::local};
    EXPECT_THROW(spf_hybrid(g, wrong, 0.5), std::invalid_argument);
}
