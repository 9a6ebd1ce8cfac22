#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "edgekit/error.hpp"
#include "edgekit/image.hpp"
#include "edgekit/kernels.hpp"
#include "edgekit/parallel.hpp"

namespace edgekit {

/// Per-pixel gradient magnitude and orientation (radians, in (-pi, pi]).
struct GradientField {
    RealPlane magnitude;
    RealPlane orientation;

    std::size_t width() const noexcept { return magnitude.width(); }
    std::size_t height() const noexcept { return magnitude.height(); }

    double max_magnitude() const {
        double m = 0.0;
        for (double v : magnitude.pixels()) m = std::max(m, v);
        return m;
    }
};

namespace detail {

inline std::size_t clamp_index(long i, std::size_t n) {
    if (i < 0) return 0;
    if (static_cast<std::size_t>(i) >= n) return n - 1;
    return static_cast<std::size_t>(i);
}

/// Correlates `src` with a list of taps under replicate borders.
///
/// Each output pixel accumulates its taps in list order starting from 0.0, so
/// the result does not depend on how rows are split across workers.
inline RealPlane correlate_taps(const RealPlane& src, const std::vector<Tap>& taps, unsigned jobs) {
    const std::size_t w = src.width(), h = src.height();
    RealPlane out(w, h, 0.0);

    // Clamped source column for every (tap, x).
    std::vector<std::vector<std::size_t>> cols(taps.size(), std::vector<std::size_t>(w));
    for (std::size_t t = 0; t < taps.size(); ++t)
        for (std::size_t x = 0; x < w; ++x)
            cols[t][x] = clamp_index(static_cast<long>(x) + taps[t].dx, w);

    parallel_for(h, jobs, [&](std::size_t y) {
        double* dst = out.row(y);
        for (std::size_t t = 0; t < taps.size(); ++t) {
            const double* srow = src.row(clamp_index(static_cast<long>(y) + taps[t].dy, h));
            const double weight = taps[t].weight;
            const std::size_t* col = cols[t].data();
            for (std::size_t x = 0; x < w; ++x) dst[x] += weight * srow[col[x]];
        }
    });
    return out;
}

}  // namespace detail

/// Kernel correlation (no flip) with replicate borders. Zero coefficients are
/// skipped, so a zero-dilated kernel costs six multiply-adds per pixel at any size.
inline RealPlane convolve(const RealPlane& image, const Kernel& kernel, unsigned jobs = 1) {
    return detail::correlate_taps(image, kernel.taps(), jobs);
}

inline RealPlane convolve(const GrayImage& image, const Kernel& kernel, unsigned jobs = 1) {
    return convolve(image.plane(), kernel, jobs);
}

inline constexpr double kDefaultSigma = 1.4;
inline constexpr std::size_t kDefaultGaussianSize = 5;

/// Sampled, normalized 1-D Gaussian of odd length `ksize`.
inline std::vector<double> gaussian_weights(double sigma, std::size_t ksize) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw UsageError("Gaussian sigma must be positive, got " + std::to_string(sigma));
    }
    if (ksize == 0 || ksize % 2 == 0) {
        throw UsageError("Gaussian kernel size must be odd, got " + std::to_string(ksize));
    }
    const long c = static_cast<long>(ksize / 2);
    std::vector<double> g(ksize);
    double sum = 0.0;
    for (long i = -c; i <= c; ++i) {
        g[static_cast<std::size_t>(i + c)] = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
        sum += g[static_cast<std::size_t>(i + c)];
    }
    for (double& v : g) v /= sum;
    return g;
}

/// Gaussian smoothing with replicate borders, applied as two 1-D passes of the
/// separable sampled kernel. Output is clamped to [0, 255].
inline GrayImage gaussian_blur(const GrayImage& image, double sigma = kDefaultSigma,
                               std::size_t ksize = kDefaultGaussianSize, unsigned jobs = 1) {
    const std::vector<double> g = gaussian_weights(sigma, ksize);
    const int c = static_cast<int>(ksize / 2);
    std::vector<Tap> horizontal, vertical;
    for (int i = -c; i <= c; ++i) {
        horizontal.push_back({0, i, g[static_cast<std::size_t>(i + c)]});
        vertical.push_back({i, 0, g[static_cast<std::size_t>(i + c)]});
    }
    RealPlane tmp = detail::correlate_taps(image.plane(), horizontal, jobs);
    return GrayImage::clamped(detail::correlate_taps(tmp, vertical, jobs));
}

/// Gradient magnitude sqrt(Gx^2 + Gy^2) and orientation atan2(Gy, Gx).
inline GradientField gradient(const RealPlane& image, const Kernel& kx, const Kernel& ky,
                              unsigned jobs = 1) {
    if (kx.axis() != Axis::X || ky.axis() != Axis::Y) {
        throw UsageError("gradient needs an x kernel and a y kernel");
    }
    if (kx.size() != ky.size()) {
        throw UsageError("gradient kernels differ in size (" + std::to_string(kx.size()) + " vs " +
                         std::to_string(ky.size()) + ")");
    }
    const RealPlane gx = convolve(image, kx, jobs);
    const RealPlane gy = convolve(image, ky, jobs);
    GradientField field{RealPlane(image.width(), image.height()),
                        RealPlane(image.width(), image.height())};
    auto mag = field.magnitude.pixels();
    auto ori = field.orientation.pixels();
    auto px = gx.pixels(), py = gy.pixels();
    for (std::size_t i = 0; i < mag.size(); ++i) {
        mag[i] = std::sqrt(px[i] * px[i] + py[i] * py[i]);
        double a = std::atan2(py[i], px[i]);
        if (a <= -std::numbers::pi) a = std::numbers::pi;
        ori[i] = a;
    }
    return field;
}

inline GradientField gradient(const GrayImage& image, const Kernel& kx, const Kernel& ky,
                              unsigned jobs = 1) {
    return gradient(image.plane(), kx, ky, jobs);
}

/// Rescales magnitudes so the maximum maps to exactly 255; an all-zero field
/// stays all-zero.
inline GrayImage normalize_magnitude(const GradientField& field) {
    const double peak = field.max_magnitude();
    std::vector<double> out(field.magnitude.size(), 0.0);
    if (peak > 0.0) {
        auto mag = field.magnitude.pixels();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (mag[i] / peak) * kMaxIntensity;
    }
    return GrayImage(field.width(), field.height(), std::move(out));
}

}  // namespace edgekit
