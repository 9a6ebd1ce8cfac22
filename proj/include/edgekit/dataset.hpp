#pragma once

// Dataset layout:
//   <root>/images/<stem>.pgm|png
//   <root>/groundtruth/<stem>/*.pgm|png   (one binary mask per annotator)

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "edgekit/error.hpp"
#include "edgekit/evaluation.hpp"
#include "edgekit/io.hpp"

namespace edgekit {

struct SkippedFile {
    std::string name;
    std::string reason;
};

struct Dataset {
    std::string name;
    std::vector<Sample> samples;  // sorted by name
    std::vector<SkippedFile> skipped;
};

namespace detail {

inline bool is_raster_path(const std::filesystem::path& p) {
    const std::string ext = lower_extension(p);
    return ext == ".pgm" || ext == ".png";
}

inline std::vector<std::filesystem::path> sorted_rasters(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_raster_path(entry.path())) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Loads every image with at least one readable, size-matching ground-truth
/// mask. Images that fail are recorded in `skipped` and the load continues.
/// Samples are ordered by name, so the on-disk listing order never matters.
inline Dataset load_dataset(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    const fs::path images = root / "images";
    const fs::path truth = root / "groundtruth";
    if (!fs::is_directory(images)) throw IoError("dataset '" + root.string() + "' has no images/ directory");
    if (!fs::is_directory(truth)) throw IoError("dataset '" + root.string() + "' has no groundtruth/ directory");

    Dataset ds;
    ds.name = fs::absolute(root).lexically_normal().filename().string();
    if (ds.name.empty()) ds.name = fs::absolute(root).lexically_normal().parent_path().filename().string();

    for (const fs::path& image_path : detail::sorted_rasters(images)) {
        const std::string stem = image_path.stem().string();
        try {
            GrayImage image = load_image(image_path);
            const fs::path gt_dir = truth / stem;
            if (!fs::is_directory(gt_dir)) {
                ds.skipped.push_back({stem, "missing ground truth directory"});
                continue;
            }
            std::vector<EdgeMap> masks;
            for (const fs::path& mask_path : detail::sorted_rasters(gt_dir)) {
                EdgeMap mask = load_edge_map(mask_path);
                if (mask.width() != image.width() || mask.height() != image.height()) {
                    throw DataError(mask_path.filename().string() + " does not match image size");
                }
                masks.push_back(std::move(mask));
            }
            if (masks.empty()) {
                ds.skipped.push_back({stem, "no ground truth masks"});
                continue;
            }
            ds.samples.push_back({stem, std::move(image), std::move(masks)});
        } catch (const Error& e) {
            ds.skipped.push_back({stem, e.what()});
        }
    }
    std::sort(ds.samples.begin(), ds.samples.end(),
              [](const Sample& a, const Sample& b) { return a.name < b.name; });
    if (ds.samples.empty()) throw DataError("dataset '" + root.string() + "' has no usable images");
    return ds;
}

}  // namespace edgekit
