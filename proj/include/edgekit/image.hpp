#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgekit/error.hpp"

namespace edgekit {

inline constexpr double kMaxIntensity = 255.0;
inline constexpr std::uint8_t kEdgeValue = 255;

/// Dense row-major 2-D array. The building block for images, response planes
/// and binary maps; carries no value-range invariant of its own.
template <class T>
class Plane {
public:
    using value_type = T;

    Plane() = default;

    Plane(std::size_t width, std::size_t height, T fill = T{})
        : width_(width), height_(height), data_(width * height, fill) {}

    Plane(std::size_t width, std::size_t height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != width_ * height_) {
            throw DataError("plane data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(width_) + "x" +
                            std::to_string(height_));
        }
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
    const T& operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

    T* row(std::size_t y) { return data_.data() + y * width_; }
    const T* row(std::size_t y) const { return data_.data() + y * width_; }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }

    bool same_shape(std::size_t w, std::size_t h) const noexcept {
        return width_ == w && height_ == h;
    }
    template <class U>
    bool same_shape(const Plane<U>& other) const noexcept {
        return same_shape(other.width(), other.height());
    }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<T> data_;
};

using RealPlane = Plane<double>;

/// Grayscale image with real-valued intensities in [0, 255].
class GrayImage {
public:
    GrayImage(std::size_t width, std::size_t height, std::vector<double> data)
        : plane_(check_dims(width, height), height, std::move(data)) {
        for (double v : plane_.pixels()) {
            if (!(v >= 0.0 && v <= kMaxIntensity)) {
                throw DataError("intensity " + std::to_string(v) + " outside [0, 255]");
            }
        }
    }

    GrayImage(std::size_t width, std::size_t height, double fill = 0.0)
        : GrayImage(width, height, std::vector<double>(check_dims(width, height) * height, fill)) {}

    /// Clamps every sample into [0, 255]; used by stages that may overshoot slightly.
    static GrayImage clamped(RealPlane plane) {
        for (double& v : plane.pixels()) v = std::clamp(v, 0.0, kMaxIntensity);
        const std::size_t w = plane.width(), h = plane.height();
        return GrayImage(w, h, std::vector<double>(plane.pixels().begin(), plane.pixels().end()));
    }

    std::size_t width() const noexcept { return plane_.width(); }
    std::size_t height() const noexcept { return plane_.height(); }
    double operator()(std::size_t x, std::size_t y) const { return plane_(x, y); }
    std::span<const double> pixels() const noexcept { return plane_.pixels(); }
    const RealPlane& plane() const noexcept { return plane_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    static std::size_t check_dims(std::size_t width, std::size_t height) {
        if (width == 0 || height == 0) {
            throw DataError("image dimensions must be positive, got " + std::to_string(width) +
                            "x" + std::to_string(height));
        }
        return width;
    }

    RealPlane plane_;
};

/// Binary edge image: every pixel is 0 or 255.
class EdgeMap {
public:
    EdgeMap(std::size_t width, std::size_t height)
        : plane_(width, height, std::uint8_t{0}) {}

    EdgeMap(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
        : plane_(width, height, std::move(data)) {
        for (std::uint8_t v : plane_.pixels()) {
            if (v != 0 && v != kEdgeValue) {
                throw DataError("edge map value " + std::to_string(v) + " is neither 0 nor 255");
            }
        }
    }

    std::size_t width() const noexcept { return plane_.width(); }
    std::size_t height() const noexcept { return plane_.height(); }
    std::size_t size() const noexcept { return plane_.size(); }

    bool is_edge(std::size_t x, std::size_t y) const { return plane_(x, y) != 0; }
    void set(std::size_t x, std::size_t y, bool edge) { plane_(x, y) = edge ? kEdgeValue : 0; }
    bool is_edge_at(std::size_t index) const { return plane_.pixels()[index] != 0; }

    std::span<const std::uint8_t> pixels() const noexcept { return plane_.pixels(); }

    std::size_t edge_count() const {
        return static_cast<std::size_t>(
            std::count(plane_.pixels().begin(), plane_.pixels().end(), kEdgeValue));
    }

    /// True when every edge pixel here is also an edge pixel of `other`.
    bool subset_of(const EdgeMap& other) const {
        if (!plane_.same_shape(other.width(), other.height())) return false;
        auto a = pixels(), b = other.pixels();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] && !b[i]) return false;
        }
        return true;
    }

    friend bool operator==(const EdgeMap&, const EdgeMap&) = default;

private:
    Plane<std::uint8_t> plane_;
};

using Rgb = std::array<std::uint8_t, 3>;

/// BT.601 luma: 0.299 R + 0.587 G + 0.114 B.
inline GrayImage to_grayscale(std::span<const Rgb> rgb, std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) {
        throw DataError("image dimensions must be positive");
    }
    if (rgb.size() != width * height) {
        throw DataError("got " + std::to_string(rgb.size()) + " RGB pixels for a " +
                        std::to_string(width) + "x" + std::to_string(height) + " image");
    }
    std::vector<double> gray(rgb.size());
    for (std::size_t i = 0; i < rgb.size(); ++i) {
        const auto [r, g, b] = rgb[i];
        const double lo = std::min({r, g, b});
        const double hi = std::max({r, g, b});
        // Rounding in the weighted sum may step one ulp outside the channel range.
        gray[i] = std::clamp(0.299 * r + 0.587 * g + 0.114 * b, lo, hi);
    }
    return GrayImage(width, height, std::move(gray));
}

inline double max_intensity(const GrayImage& image) {
    auto px = image.pixels();
    return *std::max_element(px.begin(), px.end());
}

}  // namespace edgekit
