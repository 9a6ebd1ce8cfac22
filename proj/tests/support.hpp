#pragma once

// Shared random generators and brute-force oracles for the test suites.
// Oracles are written from the definitions, not from the library code.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "edgekit/edgekit.hpp"
#include "edgekit/synthetic.hpp"

namespace edgekit::test {

using Engine = std::mt19937_64;

inline std::size_t uniform_size(Engine& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Engine& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline GrayImage random_image(Engine& rng, std::size_t w, std::size_t h, bool integral = false) {
    std::vector<double> px(w * h);
    for (double& v : px) v = integral ? static_cast<double>(uniform_size(rng, 0, 255)) : uniform_real(rng, 0.0, 255.0);
    return GrayImage(w, h, std::move(px));
}

inline EdgeMap random_edges(Engine& rng, std::size_t w, std::size_t h, double density) {
    EdgeMap m(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) m.set(x, y, uniform_real(rng, 0.0, 1.0) < density);
    return m;
}

/// Every kernel the library can build: extended 3..15 and the 5x5 registry families.
inline std::vector<Kernel> all_kernels(const KernelRegistry& registry) {
    std::vector<Kernel> out;
    for (std::size_t n = 3; n <= 15; n += 2)
        for (Axis a : {Axis::X, Axis::Y}) out.push_back(extended_sobel(n, a));
    for (const Kernel* k : registry.all()) out.push_back(*k);
    return out;
}

inline const KernelRegistry& bundled_registry() {
    static const KernelRegistry registry = KernelRegistry::from_file(EDGEKIT_TEST_REGISTRY);
    return registry;
}

/// Direct correlation: out(x,y) = sum_{i,j} k(i,j) * img(clamp(x+j-c), clamp(y+i-c)),
/// visiting (i, j) in row-major order and skipping zero coefficients.
inline RealPlane convolve_oracle(const RealPlane& img, const Kernel& k) {
    const long w = static_cast<long>(img.width()), h = static_cast<long>(img.height());
    const long n = static_cast<long>(k.size()), c = n / 2;
    RealPlane out(img.width(), img.height(), 0.0);
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x) {
            double acc = 0.0;
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j) {
                    const double kv = k(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                    if (kv == 0.0) continue;
                    const long sx = std::clamp(x + j - c, 0L, w - 1);
                    const long sy = std::clamp(y + i - c, 0L, h - 1);
                    acc += kv * img(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
                }
            out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
        }
    return out;
}

/// Hysteresis by repeated relaxation until nothing changes.
inline EdgeMap hysteresis_oracle(const RealPlane& p, double high, double low) {
    const std::size_t w = p.width(), h = p.height();
    std::vector<int> on(w * h, 0);
    for (std::size_t i = 0; i < w * h; ++i) on[i] = p.pixels()[i] > 0.0 && p.pixels()[i] >= high;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                const std::size_t i = y * w + x;
                const double v = p.pixels()[i];
                if (on[i] || !(v > 0.0 && v >= low)) continue;
                for (long dy = -1; dy <= 1 && !on[i]; ++dy)
                    for (long dx = -1; dx <= 1; ++dx) {
                        const long nx = static_cast<long>(x) + dx, ny = static_cast<long>(y) + dy;
                        if (nx < 0 || ny < 0 || nx >= static_cast<long>(w) || ny >= static_cast<long>(h)) continue;
                        if (on[static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx)]) {
                            on[i] = 1;
                            changed = true;
                            break;
                        }
                    }
            }
    }
    EdgeMap out(w, h);
    for (std::size_t i = 0; i < w * h; ++i) out.set(i % w, i / w, on[i] != 0);
    return out;
}

/// All-pairs matching under Chebyshev distance.
inline ConfusionCounts match_oracle(const EdgeMap& cand, const std::vector<EdgeMap>& gts, std::size_t tol) {
    const long w = static_cast<long>(cand.width()), h = static_cast<long>(cand.height());
    const long t = static_cast<long>(tol);
    std::vector<std::pair<long, long>> truth, pred;
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x) {
            bool any = false;
            for (const EdgeMap& g : gts) any = any || g.is_edge(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
            if (any) truth.emplace_back(x, y);
            if (cand.is_edge(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) pred.emplace_back(x, y);
        }
    const auto near = [t](std::pair<long, long> a, std::pair<long, long> b) {
        return std::max(std::abs(a.first - b.first), std::abs(a.second - b.second)) <= t;
    };
    ConfusionCounts c;
    for (auto p : pred) {
        const bool hit = std::any_of(truth.begin(), truth.end(), [&](auto g) { return near(p, g); });
        ++(hit ? c.tp : c.fp);
    }
    for (auto g : truth)
        if (std::none_of(pred.begin(), pred.end(), [&](auto p) { return near(p, g); })) ++c.fn;
    return c;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    namespace fs = std::filesystem;
    static std::uint64_t counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("edgekit-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace edgekit::test
