#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "edgekit/error.hpp"
#include "edgekit/filtering.hpp"
#include "edgekit/image.hpp"
#include "edgekit/kernels.hpp"

namespace edgekit {

/// Which maximum the hysteresis thresholds are scaled from.
enum class ThresholdSource {
    ImageMax,     // peak intensity of the input image
    GradientMax,  // peak of the magnitude plane entering non-maximum suppression
};

inline std::string_view to_string(ThresholdSource s) {
    return s == ThresholdSource::GradientMax ? "gradient" : "image";
}

struct CannyConfig {
    FilterSpec filter{};
    bool blur = true;
    double sigma = kDefaultSigma;
    std::size_t gaussian_ksize = kDefaultGaussianSize;
    double high_ratio = 0.7;
    double low_ratio = 0.3;
    ThresholdSource threshold_source = ThresholdSource::ImageMax;

    void validate() const {
        if (!(high_ratio > 0.0 && high_ratio <= 1.0)) {
            throw UsageError("high ratio must lie in (0, 1], got " + std::to_string(high_ratio));
        }
        if (!(low_ratio > 0.0 && low_ratio <= 1.0)) {
            throw UsageError("low ratio must lie in (0, 1], got " + std::to_string(low_ratio));
        }
        if (blur) gaussian_weights(sigma, gaussian_ksize);
    }
};

struct HysteresisThresholds {
    double high;
    double low;
};

/// T_h = max * high_ratio, T_l = T_h * low_ratio.
inline HysteresisThresholds double_threshold(double max_value, const CannyConfig& config) {
    const double high = max_value * config.high_ratio;
    return {high, high * config.low_ratio};
}

/// Gradient direction folded to one of four bins: 0 (0 deg), 1 (45), 2 (90), 3 (135).
/// Angles on a 22.5-degree boundary go to the lower bin; 157.5 goes to 135.
inline int direction_bin(double radians) {
    double deg = radians * (180.0 / std::numbers::pi);
    deg = std::fmod(deg, 180.0);
    if (deg < 0.0) deg += 180.0;
    if (deg <= 22.5) return 0;
    if (deg <= 67.5) return 1;
    if (deg <= 112.5) return 2;
    if (deg <= 157.5) return 3;
    return 0;
}

namespace detail {

// Neighbour offsets (dx, dy with y pointing down) along the gradient line for
// each bin. Orientation is atan2(Gy, Gx) with Gx = left - right and
// Gy = top - bottom, so the gradient line in image coordinates is (Gx, Gy).
inline constexpr std::array<std::array<int, 2>, 4> kBinStep{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}}};

}  // namespace detail

/// Keeps a pixel iff its magnitude is >= both neighbours along its quantized
/// gradient direction (out-of-image neighbours count as 0); zeroes the rest.
inline RealPlane non_max_suppression(const GradientField& field) {
    const std::size_t w = field.width(), h = field.height();
    RealPlane out(w, h, 0.0);
    const auto at = [&](long x, long y) {
        if (x < 0 || y < 0 || x >= static_cast<long>(w) || y >= static_cast<long>(h)) return 0.0;
        return field.magnitude(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double m = field.magnitude(x, y);
            if (m <= 0.0) continue;
            const auto [dx, dy] = detail::kBinStep[direction_bin(field.orientation(x, y))];
            const long lx = static_cast<long>(x), ly = static_cast<long>(y);
            if (m >= at(lx + dx, ly + dy) && m >= at(lx - dx, ly - dy)) out(x, y) = m;
        }
    }
    return out;
}

/// Double-threshold edge tracking. Strong pixels (>= high) seed edges; weak
/// pixels (>= low, < high) are kept when 8-connected to a seed through other
/// weak or strong pixels. Zero-valued pixels are never edges, which keeps a
/// flat plane empty even when both thresholds collapse to 0.
inline EdgeMap hysteresis(const RealPlane& plane, double high, double low) {
    if (low > high) {
        throw UsageError("hysteresis low threshold " + std::to_string(low) +
                         " exceeds high threshold " + std::to_string(high));
    }
    const std::size_t w = plane.width(), h = plane.height();
    EdgeMap out(w, h);
    std::vector<std::uint8_t> kept(w * h, 0);
    std::vector<std::size_t> worklist;
    const auto candidate = [&](std::size_t i) {
        const double v = plane.pixels()[i];
        return v > 0.0 && v >= low;
    };

    for (std::size_t i = 0; i < w * h; ++i) {
        const double v = plane.pixels()[i];
        if (v > 0.0 && v >= high) {
            kept[i] = 1;
            worklist.push_back(i);
        }
    }
    while (!worklist.empty()) {
        const std::size_t i = worklist.back();
        worklist.pop_back();
        const std::size_t x = i % w, y = i / w;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const long nx = static_cast<long>(x) + dx, ny = static_cast<long>(y) + dy;
                if (nx < 0 || ny < 0 || nx >= static_cast<long>(w) || ny >= static_cast<long>(h)) continue;
                const std::size_t n = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
                if (!kept[n] && candidate(n)) {
                    kept[n] = 1;
                    worklist.push_back(n);
                }
            }
        }
    }
    for (std::size_t i = 0; i < w * h; ++i)
        if (kept[i]) out.set(i % w, i / w, true);
    return out;
}

/// Intermediate products of one Canny run, exposed for inspection and tests.
struct CannyTrace {
    GradientField gradient;
    RealPlane suppressed;
    HysteresisThresholds thresholds;
    EdgeMap edges;
};

inline CannyTrace canny_trace(const GrayImage& image, const CannyConfig& config,
                              const KernelRegistry* registry = nullptr, unsigned jobs = 1) {
    config.validate();
    const KernelPair kernels = resolve_filter(config.filter, registry);
    const GrayImage smoothed =
        config.blur ? gaussian_blur(image, config.sigma, config.gaussian_ksize, jobs) : image;
    GradientField field = gradient(smoothed, kernels.x, kernels.y, jobs);
    RealPlane suppressed = non_max_suppression(field);
    const double peak = config.threshold_source == ThresholdSource::GradientMax
                            ? field.max_magnitude()
                            : max_intensity(image);
    const HysteresisThresholds t = double_threshold(peak, config);
    EdgeMap edges = hysteresis(suppressed, t.high, t.low);
    return {std::move(field), std::move(suppressed), t, std::move(edges)};
}

inline EdgeMap canny(const GrayImage& image, const CannyConfig& config,
                     const KernelRegistry* registry = nullptr, unsigned jobs = 1) {
    return canny_trace(image, config, registry, jobs).edges;
}

}  // namespace edgekit
