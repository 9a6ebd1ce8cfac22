#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace edgekit;

namespace {

std::vector<Sample> random_dataset(test::Engine& rng, std::size_t count) {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t w = test::uniform_size(rng, 4, 20), h = test::uniform_size(rng, 4, 20);
        std::vector<EdgeMap> gts;
        for (std::size_t a = 0, n = test::uniform_size(rng, 1, 3); a < n; ++a) gts.push_back(test::random_edges(rng, w, h, 0.1));
        out.push_back({"img" + std::to_string(i), test::random_image(rng, w, h, rng() % 2 == 0), std::move(gts)});
    }
    return out;
}

}  // namespace

TEST(Prf, WorkedExample) {
    const PRF p = prf({50, 50, 0});
    EXPECT_EQ(p.recall, 1.0);
    EXPECT_EQ(p.precision, 0.5);
    EXPECT_NEAR(p.f1, 2.0 / 3.0, 1e-15);
}

TEST(Prf, ZeroDenominators) {
    const PRF p = prf({0, 0, 0});
    EXPECT_EQ(p.precision, 0.0);
    EXPECT_EQ(p.recall, 0.0);
    EXPECT_EQ(p.f1, 0.0);
    EXPECT_EQ(prf({0, 5, 5}).f1, 0.0);
}

TEST(Prf, HarmonicMeanIdentity) {
    test::Engine rng(12);
    for (int i = 0; i < 2000; ++i) {
        const ConfusionCounts c{rng() % 1000, rng() % 1000, rng() % 1000};
        const PRF p = prf(c);
        const double direct = (2.0 * c.tp + c.fp + c.fn) == 0 ? 0.0 : 2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn);
        EXPECT_NEAR(p.f1, direct, 1e-12);
        if (p.precision + p.recall > 0) {
            EXPECT_NEAR(p.f1, 2 * p.precision * p.recall / (p.precision + p.recall), 1e-12);
        }
    }
}

TEST(Tolerance, DefaultFromDiagonal) {
    EXPECT_EQ(default_tolerance(481, 321), 4u);
    EXPECT_EQ(default_tolerance(10, 10), 0u);
}

TEST(Match, ExactAndShifted) {
    EdgeMap gt(5, 5), cand(5, 5);
    gt.set(2, 2, true);
    cand.set(3, 3, true);
    EXPECT_EQ(match_edges(cand, {gt}, 0), (ConfusionCounts{0, 1, 1}));
    EXPECT_EQ(match_edges(cand, {gt}, 1), (ConfusionCounts{1, 0, 0}));
}

TEST(Match, EmptyCandidate) {
    EdgeMap gt(4, 4);
    gt.set(0, 0, true);
    gt.set(1, 0, true);
    EXPECT_EQ(match_edges(EdgeMap(4, 4), {gt}, 2), (ConfusionCounts{0, 0, 2}));
}

TEST(Match, AgreesWithAllPairsOracle) {
    test::Engine rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t w = test::uniform_size(rng, 1, 14), h = test::uniform_size(rng, 1, 14);
        const EdgeMap cand = test::random_edges(rng, w, h, test::uniform_real(rng, 0.0, 0.4));
        std::vector<EdgeMap> gts;
        for (std::size_t a = 0, n = test::uniform_size(rng, 1, 3); a < n; ++a)
            gts.push_back(test::random_edges(rng, w, h, test::uniform_real(rng, 0.0, 0.3)));
        const std::size_t tol = test::uniform_size(rng, 0, 4);
        ASSERT_EQ(match_edges(cand, gts, tol), test::match_oracle(cand, gts, tol)) << trial;
    }
}

TEST(Match, MonotoneInTolerance) {
    test::Engine rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        const EdgeMap cand = test::random_edges(rng, 20, 15, 0.1);
        const std::vector<EdgeMap> gts{test::random_edges(rng, 20, 15, 0.05)};
        ConfusionCounts prev = match_edges(cand, gts, 0);
        for (std::size_t tol = 1; tol <= 6; ++tol) {
            const ConfusionCounts c = match_edges(cand, gts, tol);
            EXPECT_GE(c.tp, prev.tp);
            EXPECT_LE(c.fp, prev.fp);
            EXPECT_LE(c.fn, prev.fn);
            prev = c;
        }
    }
}

TEST(Match, ShapeMismatchIsDataError) {
    EXPECT_THROW(match_edges(EdgeMap(4, 4), {EdgeMap(5, 4)}, 1), DataError);
    EXPECT_THROW(match_edges(EdgeMap(4, 4), {}, 1), DataError);
}

TEST(Sweep, FastRouteEqualsPerThresholdMatching) {
    test::Engine rng(33);
    std::vector<double> grid = default_threshold_grid();
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t w = test::uniform_size(rng, 1, 18), h = test::uniform_size(rng, 1, 18);
        const GrayImage s = test::random_image(rng, w, h, trial % 2 == 0);
        const std::vector<EdgeMap> gts{test::random_edges(rng, w, h, 0.15), test::random_edges(rng, w, h, 0.1)};
        const std::size_t tol = test::uniform_size(rng, 0, 3);
        std::vector<double> thresholds = grid;
        std::shuffle(thresholds.begin(), thresholds.end(), rng);
        thresholds.resize(test::uniform_size(rng, 1, thresholds.size()));
        const auto fast = sweep_counts(s, gts, tol, thresholds);
        for (std::size_t k = 0; k < thresholds.size(); ++k)
            ASSERT_EQ(fast[k], match_edges(threshold_map(s, thresholds[k]), gts, tol)) << thresholds[k];
    }
}

TEST(Evaluate, GenericAndFastRoutesAgree) {
    test::Engine rng(34);
    const auto data = random_dataset(rng, 5);
    EvalOptions opts;
    opts.thresholds = default_threshold_grid();
    opts.tolerance = 1;
    const auto strength = [&](std::size_t i) { return data[i].image; };
    const EvalReport fast = evaluate_strength("x", data, strength, opts);
    const EvalReport slow = evaluate_filter(
        "x", data, [&](std::size_t i, double t) { return threshold_map(data[i].image, t); }, opts);
    EXPECT_EQ(fast.per_threshold, slow.per_threshold);
    EXPECT_EQ(fast.best_threshold, slow.best_threshold);
    EXPECT_EQ(fast.overall, slow.overall);
}

TEST(Evaluate, ManualThreeImageTotals) {
    test::Engine rng(35);
    const auto data = random_dataset(rng, 3);
    const std::vector<double> grid{10, 100, 200};
    EvalOptions opts;
    opts.thresholds = grid;
    opts.tolerance = 2;
    const EvalReport r = evaluate_strength("x", data, [&](std::size_t i) { return data[i].image; }, opts);
    double best_f1 = -1, best_t = 0;
    ConfusionCounts best_c;
    for (double t : grid) {
        ConfusionCounts total;
        for (const Sample& s : data) total += test::match_oracle(threshold_map(s.image, t), s.ground_truths, 2);
        if (prf(total).f1 > best_f1) {
            best_f1 = prf(total).f1;
            best_t = t;
            best_c = total;
        }
    }
    EXPECT_EQ(r.best_threshold, best_t);
    EXPECT_EQ(r.overall, best_c);
    ASSERT_EQ(r.images.size(), 3u);
}

TEST(Evaluate, TiesGoToSmallerThreshold) {
    const std::vector<ConfusionCounts> counts{{5, 5, 5}, {5, 5, 5}, {1, 9, 9}};
    EXPECT_EQ(best_threshold_index(counts, {50, 20, 10}), 1u);
}

TEST(Evaluate, PermutationInvariant) {
    test::Engine rng(36);
    auto data = random_dataset(rng, 6);
    EvalOptions opts;
    opts.thresholds = default_threshold_grid();
    const auto run = [&](const std::vector<Sample>& d) {
        return evaluate_strength("x", d, [&](std::size_t i) { return d[i].image; }, opts);
    };
    const EvalReport a = run(data);
    std::reverse(data.begin(), data.end());
    const EvalReport b = run(data);
    EXPECT_EQ(a.per_threshold, b.per_threshold);
    EXPECT_EQ(a.best_threshold, b.best_threshold);
}

TEST(Evaluate, ThreadCountInvariant) {
    test::Engine rng(37);
    const auto data = random_dataset(rng, 7);
    EvalOptions opts;
    opts.thresholds = default_threshold_grid();
    const auto strength = [&](std::size_t i) { return data[i].image; };
    const EvalReport a = evaluate_strength("x", data, strength, opts);
    opts.jobs = 4;
    const EvalReport b = evaluate_strength("x", data, strength, opts);
    EXPECT_EQ(a.per_threshold, b.per_threshold);
}

TEST(Evaluate, RejectsEmptyInputs) {
    EvalOptions opts;
    opts.thresholds = {1};
    EXPECT_THROW(evaluate_strength("x", {}, [](std::size_t) { return GrayImage(1, 1); }, opts), DataError);
    test::Engine rng(38);
    const auto data = random_dataset(rng, 1);
    opts.thresholds.clear();
    EXPECT_THROW(evaluate_strength("x", data, [&](std::size_t) { return data[0].image; }, opts), UsageError);
}

TEST(Dataset, LoadsSortedAndSkipsBrokenEntries) {
    namespace fs = std::filesystem;
    const fs::path root = test::scratch_dir("dataset");
    fs::create_directories(root / "images");
    fs::create_directories(root / "groundtruth" / "b");
    fs::create_directories(root / "groundtruth" / "a");
    fs::create_directories(root / "groundtruth" / "c");
    save_image(root / "images" / "b.pgm", GrayImage(4, 4, 10.0));
    save_image(root / "images" / "a.pgm", GrayImage(4, 4, 20.0));
    save_image(root / "images" / "c.pgm", GrayImage(4, 4, 30.0));
    save_image(root / "images" / "d.pgm", GrayImage(4, 4, 40.0));
    save_image(root / "groundtruth" / "a" / "0.pgm", EdgeMap(4, 4));
    save_image(root / "groundtruth" / "b" / "0.pgm", EdgeMap(4, 4));
    save_image(root / "groundtruth" / "c" / "0.pgm", EdgeMap(5, 4));
    const Dataset ds = load_dataset(root);
    ASSERT_EQ(ds.samples.size(), 2u);
    EXPECT_EQ(ds.samples[0].name, "a");
    EXPECT_EQ(ds.samples[1].name, "b");
    EXPECT_EQ(ds.skipped.size(), 2u);
    fs::remove_all(root);
}
