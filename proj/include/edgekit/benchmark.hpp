#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "edgekit/canny.hpp"
#include "edgekit/dataset.hpp"
#include "edgekit/edge_pipeline.hpp"
#include "edgekit/evaluation.hpp"
#include "edgekit/kernels.hpp"

namespace edgekit {

enum class BenchMode { Threshold, Canny };

inline std::string_view to_string(BenchMode m) { return m == BenchMode::Threshold ? "threshold" : "canny"; }

inline BenchMode parse_bench_mode(std::string_view text) {
    if (text == "threshold") return BenchMode::Threshold;
    if (text == "canny") return BenchMode::Canny;
    throw UsageError("unknown mode '" + std::string(text) + "' (expected threshold or canny)");
}

struct BenchOptions {
    BenchMode mode = BenchMode::Threshold;
    bool blur = true;
    double sigma = kDefaultSigma;
    std::size_t gaussian_ksize = kDefaultGaussianSize;
    double high_ratio = 0.7;
    double low_ratio = 0.3;
    ThresholdSource threshold_source = ThresholdSource::ImageMax;
    EvalOptions eval;  // thresholds are ignored in Canny mode
};

/// Canny output is already binary, so its sweep collapses to this single level.
inline const std::vector<double> kCannyGrid{kMaxIntensity};

inline EvalReport evaluate_one(const std::vector<Sample>& samples, const FilterSpec& filter,
                               const BenchOptions& options, const KernelRegistry* registry) {
    const KernelPair kernels = resolve_filter(filter, registry);
    if (options.mode == BenchMode::Threshold) {
        return evaluate_strength(
            filter.id(), samples,
            [&](std::size_t i) {
                return edge_strength(samples[i].image, kernels, options.blur, options.sigma,
                                     options.gaussian_ksize);
            },
            options.eval);
    }
    CannyConfig cfg;
    cfg.filter = filter;
    cfg.blur = options.blur;
    cfg.sigma = options.sigma;
    cfg.gaussian_ksize = options.gaussian_ksize;
    cfg.high_ratio = options.high_ratio;
    cfg.low_ratio = options.low_ratio;
    cfg.threshold_source = options.threshold_source;
    cfg.validate();
    EvalOptions eval = options.eval;
    eval.thresholds = kCannyGrid;
    return evaluate_filter(
        filter.id(), samples,
        [&](std::size_t i, double) { return canny(samples[i].image, cfg, registry); }, eval);
}

/// One report per filter, in the order given.
inline std::vector<EvalReport> compare_filters(const std::vector<Sample>& samples,
                                               const std::vector<FilterSpec>& filters,
                                               const BenchOptions& options,
                                               const KernelRegistry* registry = nullptr) {
    if (filters.empty()) throw UsageError("no filters to compare");
    std::vector<EvalReport> reports;
    reports.reserve(filters.size());
    for (const FilterSpec& f : filters) reports.push_back(evaluate_one(samples, f, options, registry));
    return reports;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline constexpr const char* kReportSchema = "edgekit-report/1";

inline std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string format_threshold(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", t);
    return buf;
}

/// filter,recall,precision,f1,best_threshold, with a schema comment on top.
inline std::string render_csv(const std::vector<EvalReport>& reports, const std::string& set_name,
                              BenchMode mode) {
    std::ostringstream out;
    out << "# " << kReportSchema << " set=" << set_name << " mode=" << to_string(mode) << '\n';
    out << "filter,recall,precision,f1,best_threshold\n";
    for (const EvalReport& r : reports) {
        out << r.filter << ',' << fixed6(r.overall_prf.recall) << ',' << fixed6(r.overall_prf.precision)
            << ',' << fixed6(r.overall_prf.f1) << ',' << format_threshold(r.best_threshold) << '\n';
    }
    return out.str();
}

inline nlohmann::ordered_json counts_json(const ConfusionCounts& c) {
    const PRF p = prf(c);
    return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn},
            {"recall", p.recall}, {"precision", p.precision}, {"f1", p.f1}};
}

inline nlohmann::ordered_json report_json(const EvalReport& r) {
    nlohmann::ordered_json images = nlohmann::ordered_json::array();
    for (const ImageResult& im : r.images) {
        images.push_back({{"name", im.name},
                          {"tolerance", im.tolerance},
                          {"at_dataset_threshold", counts_json(im.at_dataset_threshold)},
                          {"best_threshold", im.best_threshold},
                          {"best", counts_json(im.best_counts)}});
    }
    nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < r.thresholds.size(); ++k) {
        const ConfusionCounts& c = r.per_threshold[k];
        sweep.push_back({r.thresholds[k], c.tp, c.fp, c.fn});
    }
    return {{"filter", r.filter},
            {"best_threshold", r.best_threshold},
            {"overall", counts_json(r.overall)},
            {"images", std::move(images)},
            {"sweep", std::move(sweep)}};
}

/// Full report document. `manifest` is embedded verbatim.
inline std::string render_json(const std::vector<EvalReport>& reports, const std::string& set_name,
                               BenchMode mode, const nlohmann::ordered_json& manifest,
                               const std::vector<SkippedFile>& skipped) {
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["set"] = set_name;
    doc["mode"] = std::string(to_string(mode));
    doc["matching"] = {{"method", "chebyshev-dilation"},
                       {"annotators", "union for FN, any-match for TP"},
                       {"note", "tolerant greedy matching; not the bipartite correspondPixels assignment"}};
    doc["manifest"] = manifest;
    nlohmann::ordered_json skips = nlohmann::ordered_json::array();
    for (const SkippedFile& s : skipped) skips.push_back({{"name", s.name}, {"reason", s.reason}});
    doc["skipped"] = std::move(skips);
    nlohmann::ordered_json filters = nlohmann::ordered_json::array();
    for (const EvalReport& r : reports) filters.push_back(report_json(r));
    doc["filters"] = std::move(filters);
    return doc.dump(2) + "\n";
}

}  // namespace edgekit
