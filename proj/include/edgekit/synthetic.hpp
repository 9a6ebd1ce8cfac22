#pragma once

// Deterministic synthetic boundary dataset: occluding shapes over a shaded
// background, optical blur, sensor noise and per-annotator boundary masks.
// Used to exercise the benchmark end to end when no annotated corpus is at hand.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "edgekit/image.hpp"
#include "edgekit/io.hpp"

namespace edgekit::synthetic {

struct SceneParams {
    std::size_t width = 480;
    std::size_t height = 320;
    int min_shapes = 6;
    int max_shapes = 12;
    double min_blur = 1.0;          // optical blur sigma range, pixels
    double max_blur = 3.5;
    double min_noise = 3.0;         // additive sensor noise sigma range, gray levels
    double max_noise = 10.0;
    double texture_fraction = 0.6;  // share of regions carrying correlated texture
    int min_clutter = 10;           // small unannotated blobs per image
    int max_clutter = 40;
    int annotators = 3;
};

struct Scene {
    GrayImage image;
    std::vector<EdgeMap> annotations;
};

/// Small deterministic generator: identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    double normal() {
        // Box-Muller; the spare value is dropped to keep the stream simple.
        double u1 = uniform(0.0, 1.0);
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform(0.0, 1.0);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

struct Region {
    double base;
    double gx, gy;         // linear shading slope
    double texture_amp;    // 0 for flat regions
    int texture_scale;     // index into the correlated-noise fields
};

struct Shape {
    int kind;  // 0 ellipse, 1 rotated rectangle, 2 half-plane
    double cx, cy, a, b, angle;
};

inline bool inside(const Shape& s, double x, double y) {
    const double c = std::cos(s.angle), sn = std::sin(s.angle);
    const double u = (x - s.cx) * c + (y - s.cy) * sn;
    const double v = -(x - s.cx) * sn + (y - s.cy) * c;
    switch (s.kind) {
        case 0: return (u * u) / (s.a * s.a) + (v * v) / (s.b * s.b) <= 1.0;
        case 1: return std::abs(u) <= s.a && std::abs(v) <= s.b;
        default: return v >= 0.0;
    }
}

inline std::vector<double> blur(const std::vector<double>& src, std::size_t w, std::size_t h, double sigma) {
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * r + 1);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    for (double& v : k) v /= sum;
    auto clampi = [](long i, std::size_t n) { return static_cast<std::size_t>(std::clamp<long>(i, 0, static_cast<long>(n) - 1)); };
    std::vector<double> tmp(src.size()), out(src.size());
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * src[y * w + clampi(static_cast<long>(x) + i, w)];
            tmp[y * w + x] = acc;
        }
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp[clampi(static_cast<long>(y) + i, h) * w + x];
            out[y * w + x] = acc;
        }
    return out;
}

}  // namespace detail

inline Scene generate_scene(std::uint64_t seed, const SceneParams& p = {}) {
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 1);
    const std::size_t w = p.width, h = p.height;
    const double W = static_cast<double>(w), H = static_cast<double>(h);

    const int shape_count = rng.integer(p.min_shapes, p.max_shapes);
    std::vector<detail::Shape> shapes;
    std::vector<detail::Region> regions;
    const auto make_region = [&] {
        detail::Region r{};
        r.base = rng.uniform(25.0, 230.0);
        r.gx = rng.uniform(-0.15, 0.15);
        r.gy = rng.uniform(-0.15, 0.15);
        if (rng.uniform(0.0, 1.0) < p.texture_fraction) {
            r.texture_amp = rng.uniform(4.0, 20.0);
            r.texture_scale = rng.integer(0, 1);
        }
        return r;
    };
    regions.push_back(make_region());  // background
    for (int s = 0; s < shape_count; ++s) {
        detail::Shape sh{};
        const double pick = rng.uniform(0.0, 1.0);
        sh.kind = pick < 0.5 ? 0 : (pick < 0.85 ? 1 : 2);
        sh.cx = rng.uniform(0.1 * W, 0.9 * W);
        sh.cy = rng.uniform(0.1 * H, 0.9 * H);
        sh.a = rng.uniform(0.08, 0.3) * std::min(W, H);
        sh.b = rng.uniform(0.08, 0.3) * std::min(W, H);
        sh.angle = rng.uniform(0.0, std::numbers::pi);
        shapes.push_back(sh);
        regions.push_back(make_region());
    }

    // Later shapes occlude earlier ones; label 0 is the background.
    std::vector<int> label(w * h, 0);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (int s = shape_count - 1; s >= 0; --s)
                if (detail::inside(shapes[s], x + 0.5, y + 0.5)) {
                    label[y * w + x] = s + 1;
                    break;
                }

    // Two unit-variance correlated-noise fields: fine grain and coarser mottling.
    std::vector<std::vector<double>> texture;
    for (double scale : {0.8, 1.6}) {
        std::vector<double> white(w * h);
        for (double& v : white) v = rng.normal();
        std::vector<double> field = detail::blur(white, w, h, scale);
        double sq = 0.0;
        for (double v : field) sq += v * v;
        const double norm = std::sqrt(sq / static_cast<double>(field.size()));
        for (double& v : field) v /= norm;
        texture.push_back(std::move(field));
    }

    std::vector<double> clean(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const detail::Region& r = regions[label[y * w + x]];
            double v = r.base + r.gx * (x - W / 2) + r.gy * (y - H / 2);
            if (r.texture_amp > 0.0) v += r.texture_amp * texture[r.texture_scale][y * w + x];
            clean[y * w + x] = v;
        }
    }

    // Small details that annotators ignore.
    const int clutter = rng.integer(p.min_clutter, p.max_clutter);
    for (int c = 0; c < clutter; ++c) {
        const double cx = rng.uniform(0.0, W), cy = rng.uniform(0.0, H);
        const double radius = rng.uniform(1.5, 5.0);
        const double delta = (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * rng.uniform(10.0, 45.0);
        const long x0 = std::max(0L, static_cast<long>(cx - radius)), x1 = std::min(static_cast<long>(w) - 1, static_cast<long>(cx + radius));
        const long y0 = std::max(0L, static_cast<long>(cy - radius)), y1 = std::min(static_cast<long>(h) - 1, static_cast<long>(cy + radius));
        for (long y = y0; y <= y1; ++y)
            for (long x = x0; x <= x1; ++x)
                if ((x + 0.5 - cx) * (x + 0.5 - cx) + (y + 0.5 - cy) * (y + 0.5 - cy) <= radius * radius)
                    clean[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)] += delta;
    }

    const double blur_sigma = rng.uniform(p.min_blur, p.max_blur);
    const double noise_sigma = rng.uniform(p.min_noise, p.max_noise);
    std::vector<double> img = detail::blur(clean, w, h, blur_sigma);
    for (double& v : img) v = std::floor(std::clamp(v + noise_sigma * rng.normal(), 0.0, 255.0) + 0.5);

    // Boundary pixels: the pixel on the lower/right side of every label change.
    // Each annotator drops low-contrast boundaries with some probability and
    // may shift a boundary by one pixel.
    const auto contrast = [&](int a, int b) { return std::abs(regions[a].base - regions[b].base); };
    Scene scene{GrayImage(w, h, std::move(img)), {}};
    const std::size_t region_count = regions.size();
    for (int annotator = 0; annotator < p.annotators; ++annotator) {
        std::vector<std::uint8_t> keep(region_count * region_count, 0);
        for (std::size_t a = 0; a < region_count; ++a)
            for (std::size_t b = a + 1; b < region_count; ++b) {
                const double c = contrast(static_cast<int>(a), static_cast<int>(b));
                const double p_keep = c > 40.0 ? 1.0 : 0.35 + c / 60.0;
                keep[a * region_count + b] = keep[b * region_count + a] = rng.uniform(0.0, 1.0) < p_keep;
            }
        const int shift = rng.integer(0, 2) == 0 ? 1 : 0;
        EdgeMap mask(w, h);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const int l = label[y * w + x];
                int other = -1;
                if (x > 0 && label[y * w + x - 1] != l) other = label[y * w + x - 1];
                else if (y > 0 && label[(y - 1) * w + x] != l) other = label[(y - 1) * w + x];
                if (other < 0 || !keep[static_cast<std::size_t>(l) * region_count + static_cast<std::size_t>(other)]) continue;
                std::size_t mx = x, my = y;
                if (shift && x > 0 && y > 0) { --mx; --my; }
                mask.set(mx, my, true);
            }
        }
        scene.annotations.push_back(std::move(mask));
    }
    return scene;
}

/// Writes `count` scenes as <root>/images/sceneNNN.pgm with
/// <root>/groundtruth/sceneNNN/annotatorK.pgm.
inline void write_dataset(const std::filesystem::path& root, std::size_t count, std::uint64_t seed,
                          const SceneParams& params = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(root / "images");
    fs::create_directories(root / "groundtruth");
    for (std::size_t i = 0; i < count; ++i) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "scene%03zu", i);
        const Scene scene = generate_scene(seed + i, params);
        save_image(root / "images" / (std::string(stem) + ".pgm"), scene.image);
        fs::create_directories(root / "groundtruth" / stem);
        for (std::size_t a = 0; a < scene.annotations.size(); ++a) {
            save_image(root / "groundtruth" / stem / ("annotator" + std::to_string(a) + ".pgm"),
                       scene.annotations[a]);
        }
    }
}

}  // namespace edgekit::synthetic
