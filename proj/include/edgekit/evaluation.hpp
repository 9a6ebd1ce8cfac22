#pragma once

// Boundary benchmark: tolerant pixel matching against annotator masks,
// confusion counts, precision/recall/F1 and dataset-level threshold selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "edgekit/error.hpp"
#include "edgekit/image.hpp"
#include "edgekit/parallel.hpp"

namespace edgekit {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) { return a += b; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision, recall and F1 = 2TP / (2TP + FP + FN). Any ratio whose
/// denominator is zero is defined as 0.
inline PRF prf(const ConfusionCounts& c) {
    const auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    return {ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn), ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn)};
}

/// round(0.0075 * image diagonal), the usual boundary-benchmark match radius.
inline std::size_t default_tolerance(std::size_t width, std::size_t height) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    return static_cast<std::size_t>(std::lround(0.0075 * diag));
}

namespace detail {

/// Sliding-window reduction along rows then columns over a (2r+1)^2 square.
template <class T, class Reduce>
Plane<T> square_window(const Plane<T>& src, std::size_t radius, Reduce reduce) {
    if (radius == 0) return src;
    const std::size_t w = src.width(), h = src.height();
    const long r = static_cast<long>(radius);
    Plane<T> tmp(w, h), out(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const long lo = std::max(0L, static_cast<long>(x) - r);
            const long hi = std::min(static_cast<long>(w) - 1, static_cast<long>(x) + r);
            T acc = src(static_cast<std::size_t>(lo), y);
            for (long k = lo + 1; k <= hi; ++k) acc = reduce(acc, src(static_cast<std::size_t>(k), y));
            tmp(x, y) = acc;
        }
    }
    for (std::size_t y = 0; y < h; ++y) {
        const long lo = std::max(0L, static_cast<long>(y) - r);
        const long hi = std::min(static_cast<long>(h) - 1, static_cast<long>(y) + r);
        for (std::size_t x = 0; x < w; ++x) {
            T acc = tmp(x, static_cast<std::size_t>(lo));
            for (long k = lo + 1; k <= hi; ++k) acc = reduce(acc, tmp(x, static_cast<std::size_t>(k)));
            out(x, y) = acc;
        }
    }
    return out;
}

inline Plane<std::uint8_t> as_mask(const EdgeMap& map) {
    std::vector<std::uint8_t> m(map.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = map.is_edge_at(i) ? 1 : 0;
    return Plane<std::uint8_t>(map.width(), map.height(), std::move(m));
}

inline Plane<std::uint8_t> dilate(const Plane<std::uint8_t>& mask, std::size_t radius) {
    return square_window(mask, radius, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); });
}

inline void check_ground_truths(std::size_t width, std::size_t height,
                                const std::vector<EdgeMap>& ground_truths) {
    if (ground_truths.empty()) throw DataError("at least one ground-truth map is required");
    for (const EdgeMap& g : ground_truths) {
        if (g.width() != width || g.height() != height) {
            throw DataError("ground truth is " + std::to_string(g.width()) + "x" +
                            std::to_string(g.height()) + ", candidate is " + std::to_string(width) +
                            "x" + std::to_string(height));
        }
    }
}

}  // namespace detail

/// Pixel-wise union of annotator maps.
inline EdgeMap union_of(const std::vector<EdgeMap>& maps) {
    if (maps.empty()) throw DataError("union of an empty map list");
    EdgeMap out(maps.front().width(), maps.front().height());
    for (const EdgeMap& m : maps) {
        if (m.width() != out.width() || m.height() != out.height()) {
            throw DataError("ground-truth maps differ in size");
        }
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m.is_edge_at(i)) out.set(i % out.width(), i / out.width(), true);
    }
    return out;
}

/// Tolerant matching under Chebyshev distance.
///
/// TP: candidate pixels with a ground-truth pixel (any annotator) within
/// `tolerance`. FP: the remaining candidate pixels. FN: pixels of the
/// ground-truth union with no candidate pixel within `tolerance`.
inline ConfusionCounts match_edges(const EdgeMap& candidate, const std::vector<EdgeMap>& ground_truths,
                                   std::size_t tolerance) {
    detail::check_ground_truths(candidate.width(), candidate.height(), ground_truths);
    const auto truth = detail::as_mask(union_of(ground_truths));
    const auto cand = detail::as_mask(candidate);
    const auto near_truth = detail::dilate(truth, tolerance);
    const auto near_cand = detail::dilate(cand, tolerance);
    ConfusionCounts c;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (cand.pixels()[i]) ++(near_truth.pixels()[i] ? c.tp : c.fp);
        if (truth.pixels()[i] && !near_cand.pixels()[i]) ++c.fn;
    }
    return c;
}

/// Counts for every threshold at once when the candidate at threshold t is
/// {p : strength(p) >= t}. Equivalent to thresholding and calling
/// match_edges per threshold, in O(pixels * log thresholds).
inline std::vector<ConfusionCounts> sweep_counts(const GrayImage& strength,
                                                 const std::vector<EdgeMap>& ground_truths,
                                                 std::size_t tolerance,
                                                 const std::vector<double>& thresholds) {
    detail::check_ground_truths(strength.width(), strength.height(), ground_truths);
    const std::size_t n = thresholds.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return thresholds[a] < thresholds[b]; });
    std::vector<double> sorted(n);
    for (std::size_t k = 0; k < n; ++k) sorted[k] = thresholds[order[k]];
    // Number of sorted thresholds t with t <= v; pixel v passes thresholds [0, passes(v)).
    const auto passes = [&](double v) {
        return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    };

    const auto truth = detail::as_mask(union_of(ground_truths));
    const auto near_truth = detail::dilate(truth, tolerance);
    const auto window_max =
        detail::square_window(strength.plane(), tolerance, [](double a, double b) { return std::max(a, b); });

    std::vector<std::uint64_t> tp_hist(n + 1, 0), fp_hist(n + 1, 0), hit_hist(n + 1, 0);
    std::uint64_t truth_total = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::size_t k = passes(strength.pixels()[i]);
        ++(near_truth.pixels()[i] ? tp_hist[k] : fp_hist[k]);
        if (truth.pixels()[i]) {
            ++truth_total;
            ++hit_hist[passes(window_max.pixels()[i])];
        }
    }

    std::vector<ConfusionCounts> out(n);
    std::uint64_t tp = 0, fp = 0, hit = 0;
    for (std::size_t k = n; k-- > 0;) {
        tp += tp_hist[k + 1];
        fp += fp_hist[k + 1];
        hit += hit_hist[k + 1];
        out[order[k]] = {tp, fp, truth_total - hit};
    }
    return out;
}

/// One dataset entry: an image and its annotators' boundary masks.
struct Sample {
    std::string name;
    GrayImage image;
    std::vector<EdgeMap> ground_truths;
};

struct ImageResult {
    std::string name;
    std::size_t tolerance = 0;
    ConfusionCounts at_dataset_threshold;  // counts at the dataset-best threshold
    double best_threshold = 0.0;           // per-image best (OIS-style)
    ConfusionCounts best_counts;
    PRF best;
};

struct EvalReport {
    std::string filter;
    std::vector<double> thresholds;
    std::vector<ConfusionCounts> per_threshold;  // dataset totals, same order as thresholds
    double best_threshold = 0.0;
    ConfusionCounts overall;
    PRF overall_prf;
    std::vector<ImageResult> images;
};

/// Index of the best F1; equal F1 goes to the smaller threshold value.
inline std::size_t best_threshold_index(const std::vector<ConfusionCounts>& counts,
                                        const std::vector<double>& thresholds) {
    std::size_t best = 0;
    double best_f1 = -1.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double f1 = prf(counts[k]).f1;
        if (f1 > best_f1 || (f1 == best_f1 && thresholds[k] < thresholds[best])) {
            best = k;
            best_f1 = f1;
        }
    }
    return best;
}

/// Builds the report from a per-image x per-threshold count matrix.
inline EvalReport summarize(std::string filter, const std::vector<Sample>& dataset,
                            const std::vector<std::size_t>& tolerances,
                            const std::vector<double>& thresholds,
                            const std::vector<std::vector<ConfusionCounts>>& per_image) {
    EvalReport report;
    report.filter = std::move(filter);
    report.thresholds = thresholds;
    report.per_threshold.assign(thresholds.size(), {});
    for (const auto& row : per_image)
        for (std::size_t k = 0; k < thresholds.size(); ++k) report.per_threshold[k] += row[k];

    const std::size_t best = best_threshold_index(report.per_threshold, thresholds);
    report.best_threshold = thresholds[best];
    report.overall = report.per_threshold[best];
    report.overall_prf = prf(report.overall);

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const std::size_t own = best_threshold_index(per_image[i], thresholds);
        report.images.push_back({dataset[i].name, tolerances[i], per_image[i][best], thresholds[own],
                                 per_image[i][own], prf(per_image[i][own])});
    }
    return report;
}

struct EvalOptions {
    std::vector<double> thresholds;
    std::optional<std::size_t> tolerance;  // unset: default_tolerance per image
    unsigned jobs = 1;
};

namespace detail {

inline void check_eval_inputs(const std::vector<Sample>& dataset, const EvalOptions& options) {
    if (dataset.empty()) throw DataError("cannot evaluate an empty dataset");
    if (options.thresholds.empty()) throw UsageError("threshold grid is empty");
}

inline std::size_t tolerance_for(const Sample& s, const EvalOptions& options) {
    return options.tolerance.value_or(default_tolerance(s.image.width(), s.image.height()));
}

}  // namespace detail

/// Generic route: `detect(sample_index, threshold)` yields the edge map for
/// one image at one threshold, and every map is matched individually.
inline EvalReport evaluate_filter(const std::string& filter, const std::vector<Sample>& dataset,
                                  const std::function<EdgeMap(std::size_t, double)>& detect,
                                  const EvalOptions& options) {
    detail::check_eval_inputs(dataset, options);
    std::vector<std::vector<ConfusionCounts>> per_image(dataset.size());
    std::vector<std::size_t> tolerances(dataset.size());
    parallel_for(dataset.size(), options.jobs, [&](std::size_t i) {
        tolerances[i] = detail::tolerance_for(dataset[i], options);
        per_image[i].reserve(options.thresholds.size());
        for (double t : options.thresholds)
            per_image[i].push_back(match_edges(detect(i, t), dataset[i].ground_truths, tolerances[i]));
    });
    return summarize(filter, dataset, tolerances, options.thresholds, per_image);
}

/// Fast route for threshold detectors: `strength(sample_index)` yields the
/// edge-strength image once per image and the whole grid is scored from it.
inline EvalReport evaluate_strength(const std::string& filter, const std::vector<Sample>& dataset,
                                    const std::function<GrayImage(std::size_t)>& strength,
                                    const EvalOptions& options) {
    detail::check_eval_inputs(dataset, options);
    std::vector<std::vector<ConfusionCounts>> per_image(dataset.size());
    std::vector<std::size_t> tolerances(dataset.size());
    parallel_for(dataset.size(), options.jobs, [&](std::size_t i) {
        tolerances[i] = detail::tolerance_for(dataset[i], options);
        per_image[i] = sweep_counts(strength(i), dataset[i].ground_truths, tolerances[i], options.thresholds);
    });
    return summarize(filter, dataset, tolerances, options.thresholds, per_image);
}

}  // namespace edgekit
