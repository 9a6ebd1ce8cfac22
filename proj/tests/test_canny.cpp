#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace edgekit;

namespace {

GrayImage vertical_step(std::size_t w, std::size_t h, std::size_t at) {
    std::vector<double> px(w * h);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = (i % w) >= at ? 220.0 : 30.0;
    return GrayImage(w, h, px);
}

}  // namespace

TEST(DoubleThreshold, DefaultRatiosOn255) {
    const auto t = double_threshold(255.0, CannyConfig{});
    EXPECT_EQ(t.high, 178.5);
    EXPECT_EQ(t.low, 53.55);
}

TEST(DoubleThreshold, RatioValidation) {
    CannyConfig cfg;
    cfg.high_ratio = 0.0;
    EXPECT_THROW(cfg.validate(), UsageError);
    cfg.high_ratio = 1.2;
    EXPECT_THROW(cfg.validate(), UsageError);
    cfg.high_ratio = 1.0;
    cfg.low_ratio = 1.0;
    EXPECT_NO_THROW(cfg.validate());
}

TEST(DirectionBin, Boundaries) {
    const double deg = std::numbers::pi / 180.0;
    EXPECT_EQ(direction_bin(0.0), 0);
    EXPECT_EQ(direction_bin(22.5 * deg), 0);
    EXPECT_EQ(direction_bin(23.0 * deg), 1);
    EXPECT_EQ(direction_bin(67.5 * deg), 1);
    EXPECT_EQ(direction_bin(90.0 * deg), 2);
    EXPECT_EQ(direction_bin(135.0 * deg), 3);
    EXPECT_EQ(direction_bin(170.0 * deg), 0);
    EXPECT_EQ(direction_bin(std::numbers::pi), 0);
    EXPECT_EQ(direction_bin(-90.0 * deg), 2);
    EXPECT_EQ(direction_bin(-45.0 * deg), 3);
}

TEST(Nms, KeepsRidgeAlongGradient) {
    // Horizontal gradient; column 2 is the ridge.
    GradientField f{RealPlane(5, 3), RealPlane(5, 3, 0.0)};
    for (std::size_t y = 0; y < 3; ++y) {
        f.magnitude(1, y) = 4.0;
        f.magnitude(2, y) = 9.0;
        f.magnitude(3, y) = 5.0;
    }
    const RealPlane s = non_max_suppression(f);
    for (std::size_t y = 0; y < 3; ++y) {
        EXPECT_EQ(s(1, y), 0.0);
        EXPECT_EQ(s(2, y), 9.0);
        EXPECT_EQ(s(3, y), 0.0);
    }
}

TEST(Nms, PlateauSurvivesAndBorderCountsAsZero) {
    GradientField f{RealPlane(3, 1, std::vector<double>{6.0, 6.0, 1.0}), RealPlane(3, 1, 0.0)};
    const RealPlane s = non_max_suppression(f);
    EXPECT_EQ(s(0, 0), 6.0);
    EXPECT_EQ(s(1, 0), 6.0);
    EXPECT_EQ(s(2, 0), 0.0);
}

TEST(Nms, DiagonalUsesDiagonalNeighbours) {
    GradientField f{RealPlane(3, 3, 0.0), RealPlane(3, 3, std::numbers::pi / 4)};
    f.magnitude(1, 1) = 5.0;
    f.magnitude(2, 2) = 6.0;
    f.magnitude(2, 1) = 50.0;  // off the diagonal, ignored
    const RealPlane s = non_max_suppression(f);
    EXPECT_EQ(s(1, 1), 0.0);
    EXPECT_EQ(s(2, 2), 6.0);
}

TEST(Hysteresis, WeakChainNeedsStrongSeed) {
    RealPlane p(6, 1, std::vector<double>{0.0, 100.0, 60.0, 0.0, 60.0, 60.0});
    const EdgeMap m = hysteresis(p, 90.0, 50.0);
    EXPECT_TRUE(m.is_edge(1, 0));
    EXPECT_TRUE(m.is_edge(2, 0));
    EXPECT_FALSE(m.is_edge(4, 0));
    EXPECT_FALSE(m.is_edge(5, 0));
}

TEST(Hysteresis, DiagonalConnectivity) {
    RealPlane p(3, 3, 0.0);
    p(0, 0) = 100.0;
    p(1, 1) = 60.0;
    p(2, 2) = 60.0;
    EXPECT_EQ(hysteresis(p, 90.0, 50.0).edge_count(), 3u);
}

TEST(Hysteresis, MatchesRelaxationOracle) {
    test::Engine rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t w = test::uniform_size(rng, 1, 16), h = test::uniform_size(rng, 1, 16);
        RealPlane p(w, h);
        for (double& v : p.pixels()) v = test::uniform_real(rng, 0.0, 1.0) < 0.3 ? 0.0 : test::uniform_real(rng, 0.0, 100.0);
        const double high = test::uniform_real(rng, 0.0, 100.0), low = high * test::uniform_real(rng, 0.0, 1.0);
        ASSERT_EQ(hysteresis(p, high, low), test::hysteresis_oracle(p, high, low)) << trial;
    }
}

TEST(Hysteresis, LowAboveHighIsUsageError) {
    EXPECT_THROW(hysteresis(RealPlane(2, 2), 10.0, 20.0), UsageError);
}

TEST(Canny, ConstantImageIsEmpty) {
    for (auto source : {ThresholdSource::ImageMax, ThresholdSource::GradientMax}) {
        CannyConfig cfg;
        cfg.threshold_source = source;
        EXPECT_EQ(canny(GrayImage(20, 20, 128.0), cfg).edge_count(), 0u);
        EXPECT_EQ(canny(GrayImage(20, 20, 0.0), cfg).edge_count(), 0u);
    }
}

TEST(Canny, StepGivesThinVerticalLine) {
    const GrayImage img = vertical_step(32, 24, 16);
    const EdgeMap m = canny(img, CannyConfig{});
    for (std::size_t y = 0; y < 24; ++y) {
        std::size_t row = 0;
        for (std::size_t x = 0; x < 32; ++x) {
            if (m.is_edge(x, y)) {
                ++row;
                EXPECT_TRUE(x == 15 || x == 16) << x;
            }
        }
        EXPECT_GE(row, 1u);
        EXPECT_LE(row, 2u);
    }
}

TEST(Canny, LargeKernelStaysNearStep) {
    const GrayImage img = vertical_step(40, 24, 20);
    CannyConfig cfg;
    cfg.filter = FilterSpec::parse("ext7");
    const EdgeMap m = canny(img, cfg);
    ASSERT_GT(m.edge_count(), 0u);
    for (std::size_t y = 0; y < 24; ++y)
        for (std::size_t x = 0; x < 40; ++x)
            if (m.is_edge(x, y)) {
                EXPECT_LE(std::abs(static_cast<long>(x) - 20), 3) << x;
            }
}

TEST(Canny, ThresholdSourcesDiffer) {
    const GrayImage img = vertical_step(16, 8, 8);
    CannyConfig cfg;
    const auto image_max = canny_trace(img, cfg);
    EXPECT_EQ(image_max.thresholds.high, 220.0 * 0.7);
    cfg.threshold_source = ThresholdSource::GradientMax;
    const auto grad_max = canny_trace(img, cfg);
    EXPECT_EQ(grad_max.thresholds.high, grad_max.gradient.max_magnitude() * 0.7);
}

TEST(Canny, OutputIsSubsetOfSuppressedSupport) {
    test::Engine rng(4);
    const GrayImage img = test::random_image(rng, 30, 30);
    CannyConfig cfg;
    cfg.threshold_source = ThresholdSource::GradientMax;
    const auto t = canny_trace(img, cfg);
    for (std::size_t y = 0; y < 30; ++y)
        for (std::size_t x = 0; x < 30; ++x)
            if (t.edges.is_edge(x, y)) {
                EXPECT_GE(t.suppressed(x, y), t.thresholds.low);
            }
}
