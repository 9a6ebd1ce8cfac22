#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "edgekit/error.hpp"
#include "edgekit/filtering.hpp"
#include "edgekit/image.hpp"
#include "edgekit/kernels.hpp"

namespace edgekit {

inline void check_threshold(double t) {
    if (!(t >= 0.0 && t <= kMaxIntensity)) {
        throw UsageError("threshold must lie in [0, 255], got " + std::to_string(t));
    }
}

/// Gradient-threshold detector settings. `blur = false` skips the Gaussian stage.
struct PipelineConfig {
    FilterSpec filter{};
    bool blur = true;
    double sigma = kDefaultSigma;
    std::size_t gaussian_ksize = kDefaultGaussianSize;
    double threshold = 128.0;

    void validate() const {
        check_threshold(threshold);
        if (blur) gaussian_weights(sigma, gaussian_ksize);
    }
};

/// Pixels >= threshold become 255, the rest 0.
inline EdgeMap threshold_map(const GrayImage& strength, double threshold) {
    check_threshold(threshold);
    EdgeMap map(strength.width(), strength.height());
    for (std::size_t y = 0; y < strength.height(); ++y)
        for (std::size_t x = 0; x < strength.width(); ++x) map.set(x, y, strength(x, y) >= threshold);
    return map;
}

/// Smoothing, gradient and normalization: everything before the threshold.
/// The result is the edge-strength image every threshold is compared against.
inline GrayImage edge_strength(const GrayImage& image, const KernelPair& kernels, bool blur,
                               double sigma, std::size_t gaussian_ksize, unsigned jobs = 1) {
    const GrayImage smoothed = blur ? gaussian_blur(image, sigma, gaussian_ksize, jobs) : image;
    return normalize_magnitude(gradient(smoothed, kernels.x, kernels.y, jobs));
}

inline EdgeMap detect_edges(const GrayImage& image, const PipelineConfig& config,
                            const KernelRegistry* registry = nullptr, unsigned jobs = 1) {
    config.validate();
    const KernelPair kernels = resolve_filter(config.filter, registry);
    return threshold_map(
        edge_strength(image, kernels, config.blur, config.sigma, config.gaussian_ksize, jobs),
        config.threshold);
}

/// Integer thresholds 1..255; 0 is left out because it marks every pixel.
inline std::vector<double> default_threshold_grid() {
    std::vector<double> grid;
    for (int t = 1; t <= 255; ++t) grid.push_back(t);
    return grid;
}

/// One gradient computation, many thresholds. `config.threshold` is ignored;
/// entry k of the result corresponds to thresholds[k].
inline std::vector<EdgeMap> detect_edges_sweep(const GrayImage& image, const PipelineConfig& config,
                                               const std::vector<double>& thresholds,
                                               const KernelRegistry* registry = nullptr,
                                               unsigned jobs = 1) {
    if (thresholds.empty()) throw UsageError("threshold sweep needs at least one threshold");
    for (double t : thresholds) check_threshold(t);
    PipelineConfig base = config;
    base.threshold = 0.0;
    base.validate();
    const GrayImage strength =
        edge_strength(image, resolve_filter(config.filter, registry), config.blur, config.sigma,
                      config.gaussian_ksize, jobs);
    std::vector<EdgeMap> maps;
    maps.reserve(thresholds.size());
    for (double t : thresholds) maps.push_back(threshold_map(strength, t));
    return maps;
}

}  // namespace edgekit
