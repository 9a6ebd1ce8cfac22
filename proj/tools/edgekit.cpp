// edgekit command-line front end: detect, canny, bench, kernels.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data/validation error.

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "edgekit/edgekit.hpp"

#ifndef EDGEKIT_DEFAULT_REGISTRY
#define EDGEKIT_DEFAULT_REGISTRY "data/comparison_kernels.txt"
#endif

namespace fs = std::filesystem;
using namespace edgekit;

namespace {

std::filesystem::path registry_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("EDGEKIT_KERNELS")) return env;
    return EDGEKIT_DEFAULT_REGISTRY;
}

/// Loaded on first use only, so the extended family works without the data file.
class LazyRegistry {
public:
    explicit LazyRegistry(std::string flag) : flag_(std::move(flag)) {}
    const KernelRegistry* get() {
        if (!registry_) registry_ = KernelRegistry::from_file(registry_path(flag_));
        return &*registry_;
    }
    std::string path() const { return registry_path(flag_).string(); }

private:
    std::string flag_;
    std::optional<KernelRegistry> registry_;
};

FilterSpec filter_from_flags(const std::string& kernel, std::size_t size) {
    if (kernel == "sobel" || kernel == "extended" || kernel == "ext") {
        return FilterSpec::parse("ext" + std::to_string(size));
    }
    if (auto fam = parse_comparison_family(kernel)) {
        if (size != 5) throw UsageError("kernel '" + kernel + "' exists only as 5x5");
        return {FilterSpec::Kind::Comparison, 5, *fam};
    }
    throw UsageError("unknown kernel family '" + kernel + "'");
}

double parse_number(const std::string& text, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError(std::string("bad ") + what + " '" + text + "'");
    }
    return v;
}

/// "a:b" or "a:b:step" (inclusive) or a comma list.
std::vector<double> parse_threshold_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() < 2 || parts.size() > 3) throw UsageError("bad threshold range '" + text + "'");
        const double lo = parse_number(parts[0], "threshold");
        const double hi = parse_number(parts[1], "threshold");
        const double step = parts.size() == 3 ? parse_number(parts[2], "threshold step") : 1.0;
        if (!(step > 0.0) || hi < lo) throw UsageError("bad threshold range '" + text + "'");
        for (std::size_t k = 0;; ++k) {
            const double t = lo + static_cast<double>(k) * step;
            if (t > hi + 1e-9) break;
            grid.push_back(t);
        }
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) grid.push_back(parse_number(p, "threshold"));
    }
    for (double t : grid) check_threshold(t);
    if (grid.empty()) throw UsageError("threshold grid is empty");
    return grid;
}

std::vector<FilterSpec> parse_filter_list(const std::string& text) {
    std::vector<FilterSpec> filters;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
        if (!p.empty()) filters.push_back(FilterSpec::parse(p));
    }
    if (filters.empty()) throw UsageError("filter list is empty");
    return filters;
}

void check_input(const std::string& path) {
    if (!fs::exists(path)) throw IoError("input '" + path + "' does not exist");
}

void write_manifest(const fs::path& output, const RunManifest& manifest) {
    fs::path path = output;
    path += ".manifest.json";
    detail::write_file_atomic(path, manifest.to_json().dump(2) + "\n");
}

struct SmoothingFlags {
    double sigma = kDefaultSigma;
    std::size_t ksize = kDefaultGaussianSize;
    bool no_blur = false;

    void add_to(CLI::App* app) {
        app->add_option("--sigma", sigma, "Gaussian sigma")->capture_default_str();
        app->add_option("--ksize", ksize, "Gaussian kernel size (odd)")->capture_default_str();
        app->add_flag("--no-blur", no_blur, "skip the Gaussian smoothing stage");
    }
    nlohmann::ordered_json to_json() const {
        return {{"blur", !no_blur}, {"sigma", sigma}, {"ksize", ksize}};
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edgekit: zero-dilated Sobel edge detection and boundary benchmarking"};
    app.set_version_flag("--version", std::string("edgekit ") + kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string registry_flag;
    app.add_option("--registry", registry_flag,
                   "comparison kernel file (default: $EDGEKIT_KERNELS or the bundled data file)");

    // detect ---------------------------------------------------------------
    auto* detect = app.add_subcommand("detect", "threshold the normalized gradient magnitude");
    std::string d_kernel = "sobel", d_in, d_out;
    std::size_t d_size = 3;
    double d_threshold = 128.0;
    SmoothingFlags d_smooth;
    detect->add_option("--kernel", d_kernel, "sobel|extended|sobel5_gupta|prewitt5|mod_prewitt5|scharr5")
        ->capture_default_str();
    detect->add_option("--size", d_size, "kernel size (3..15, odd)")->capture_default_str();
    detect->add_option("--threshold", d_threshold, "edge threshold in [0, 255]")->capture_default_str();
    d_smooth.add_to(detect);
    detect->add_option("input", d_in, "input image (PGM or PNG)")->required();
    detect->add_option("output", d_out, "output edge map (.pgm or .png)")->required();

    // canny ----------------------------------------------------------------
    auto* cny = app.add_subcommand("canny", "Canny detector with a selectable gradient kernel");
    std::string c_kernel = "sobel", c_in, c_out, c_source = "image";
    std::size_t c_size = 3;
    double c_high = 0.7, c_low = 0.3;
    SmoothingFlags c_smooth;
    cny->add_option("--kernel", c_kernel, "gradient kernel family")->capture_default_str();
    cny->add_option("--size", c_size, "kernel size (3..15, odd)")->capture_default_str();
    cny->add_option("--high-ratio", c_high, "T_h = max * high-ratio")->capture_default_str();
    cny->add_option("--low-ratio", c_low, "T_l = T_h * low-ratio")->capture_default_str();
    cny->add_option("--threshold-source", c_source, "image: peak input intensity; gradient: peak gradient magnitude")
        ->check(CLI::IsMember({"gradient", "image"}))
        ->capture_default_str();
    c_smooth.add_to(cny);
    cny->add_option("input", c_in, "input image (PGM or PNG)")->required();
    cny->add_option("output", c_out, "output edge map (.pgm or .png)")->required();

    // bench ----------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "precision/recall/F1 benchmark over dataset(s)");
    std::vector<std::string> b_sets;
    std::string b_out = ".", b_filters = "ext3,ext5,ext7,ext9,ext11,ext13,ext15", b_mode = "threshold";
    std::string b_thresholds = "1:255", b_tolerance = "auto";
    unsigned b_jobs = default_jobs();
    double b_high = 0.7, b_low = 0.3;
    std::string b_source = "image";
    SmoothingFlags b_smooth;
    bench->add_option("datasets", b_sets, "dataset roots (images/ + groundtruth/)")->required();
    bench->add_option("--out", b_out, "report directory")->capture_default_str();
    bench->add_option("--filters", b_filters, "comma list: ext3..ext15, sobel5_gupta, prewitt5, mod_prewitt5, scharr5")
        ->capture_default_str();
    bench->add_option("--mode", b_mode, "threshold|canny")->check(CLI::IsMember({"threshold", "canny"}))
        ->capture_default_str();
    bench->add_option("--thresholds", b_thresholds, "grid: lo:hi[:step] or comma list")->capture_default_str();
    bench->add_option("--tolerance", b_tolerance, "match radius in pixels, or 'auto'")->capture_default_str();
    bench->add_option("--jobs", b_jobs, "worker threads (default: $EDGEKIT_JOBS or CPU count)");
    bench->add_option("--high-ratio", b_high, "Canny mode: T_h ratio")->capture_default_str();
    bench->add_option("--low-ratio", b_low, "Canny mode: T_l ratio")->capture_default_str();
    bench->add_option("--threshold-source", b_source, "Canny mode: image|gradient")
        ->check(CLI::IsMember({"gradient", "image"}))
        ->capture_default_str();
    b_smooth.add_to(bench);

    // kernels --------------------------------------------------------------
    auto* kern = app.add_subcommand("kernels", "print a kernel in registry text form");
    std::string k_family = "extended", k_axis = "both";
    std::size_t k_size = 3;
    kern->add_option("--family", k_family, "extended|sobel|sobel5_gupta|prewitt5|mod_prewitt5|scharr5")
        ->capture_default_str();
    kern->add_option("--size", k_size, "kernel size for the extended family")->capture_default_str();
    kern->add_option("--axis", k_axis, "x|y|both")->check(CLI::IsMember({"x", "y", "both"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    LazyRegistry registry(registry_flag);

    try {
        if (*detect) {
            check_input(d_in);
            PipelineConfig cfg;
            cfg.filter = filter_from_flags(d_kernel, d_size);
            cfg.blur = !d_smooth.no_blur;
            cfg.sigma = d_smooth.sigma;
            cfg.gaussian_ksize = d_smooth.ksize;
            cfg.threshold = d_threshold;
            cfg.validate();
            const KernelRegistry* reg =
                cfg.filter.kind == FilterSpec::Kind::Comparison ? registry.get() : nullptr;
            const EdgeMap edges = detect_edges(load_image(d_in), cfg, reg);
            save_image(d_out, edges);
            RunManifest m{"detect"};
            m.parameters = {{"input", d_in},  {"output", d_out},
                            {"filter", cfg.filter.id()}, {"threshold", d_threshold},
                            {"smoothing", d_smooth.to_json()}};
            write_manifest(d_out, m);
        } else if (*cny) {
            check_input(c_in);
            CannyConfig cfg;
            cfg.filter = filter_from_flags(c_kernel, c_size);
            cfg.blur = !c_smooth.no_blur;
            cfg.sigma = c_smooth.sigma;
            cfg.gaussian_ksize = c_smooth.ksize;
            cfg.high_ratio = c_high;
            cfg.low_ratio = c_low;
            cfg.threshold_source = c_source == "image" ? ThresholdSource::ImageMax : ThresholdSource::GradientMax;
            cfg.validate();
            const KernelRegistry* reg =
                cfg.filter.kind == FilterSpec::Kind::Comparison ? registry.get() : nullptr;
            const EdgeMap edges = canny(load_image(c_in), cfg, reg);
            save_image(c_out, edges);
            RunManifest m{"canny"};
            m.parameters = {{"input", c_in},
                            {"output", c_out},
                            {"filter", cfg.filter.id()},
                            {"high_ratio", c_high},
                            {"low_ratio", c_low},
                            {"threshold_source", std::string(to_string(cfg.threshold_source))},
                            {"smoothing", c_smooth.to_json()}};
            write_manifest(c_out, m);
        } else if (*bench) {
            BenchOptions opts;
            opts.mode = parse_bench_mode(b_mode);
            opts.blur = !b_smooth.no_blur;
            opts.sigma = b_smooth.sigma;
            opts.gaussian_ksize = b_smooth.ksize;
            opts.high_ratio = b_high;
            opts.low_ratio = b_low;
            opts.threshold_source = b_source == "image" ? ThresholdSource::ImageMax : ThresholdSource::GradientMax;
            opts.eval.thresholds = parse_threshold_grid(b_thresholds);
            if (b_tolerance != "auto") {
                const double tol = parse_number(b_tolerance, "tolerance");
                if (tol < 0 || tol != static_cast<double>(static_cast<std::size_t>(tol))) {
                    throw UsageError("tolerance must be a non-negative integer or 'auto'");
                }
                opts.eval.tolerance = static_cast<std::size_t>(tol);
            }
            opts.eval.jobs = b_jobs == 0 ? 1 : b_jobs;
            const std::vector<FilterSpec> filters = parse_filter_list(b_filters);
            if (opts.mode == BenchMode::Canny) {
                CannyConfig probe;
                probe.high_ratio = b_high;
                probe.low_ratio = b_low;
                probe.blur = opts.blur;
                probe.sigma = opts.sigma;
                probe.gaussian_ksize = opts.gaussian_ksize;
                probe.validate();
            } else if (opts.blur) {
                gaussian_weights(opts.sigma, opts.gaussian_ksize);
            }
            bool needs_registry = false;
            for (const auto& f : filters) needs_registry |= f.kind == FilterSpec::Kind::Comparison;
            const KernelRegistry* reg = needs_registry ? registry.get() : nullptr;

            fs::create_directories(b_out);
            for (const std::string& root : b_sets) {
                const Dataset ds = load_dataset(root);
                for (const SkippedFile& s : ds.skipped) {
                    std::cerr << "edgekit: skipped " << ds.name << "/" << s.name << ": " << s.reason << '\n';
                }
                const auto reports = compare_filters(ds.samples, filters, opts, reg);

                RunManifest m{"bench"};
                nlohmann::ordered_json filter_ids = nlohmann::ordered_json::array();
                for (const auto& f : filters) filter_ids.push_back(f.id());
                nlohmann::ordered_json tolerance =
                    opts.eval.tolerance ? nlohmann::ordered_json(*opts.eval.tolerance)
                                        : nlohmann::ordered_json("auto: round(0.0075 * diagonal)");
                m.parameters = {{"dataset", ds.name},
                                {"images", ds.samples.size()},
                                {"mode", b_mode},
                                {"filters", filter_ids},
                                {"thresholds", opts.mode == BenchMode::Canny ? "binary (canny)" : b_thresholds},
                                {"tolerance", tolerance},
                                {"smoothing", b_smooth.to_json()}};
                if (opts.mode == BenchMode::Canny) {
                    m.parameters["high_ratio"] = b_high;
                    m.parameters["low_ratio"] = b_low;
                    m.parameters["threshold_source"] = b_source;
                }
                if (needs_registry) m.parameters["registry"] = registry.path();

                const fs::path base = fs::path(b_out) / (ds.name + "-" + b_mode);
                fs::path csv = base, json = base;
                csv += ".csv";
                json += ".json";
                detail::write_file_atomic(csv, render_csv(reports, ds.name, opts.mode));
                detail::write_file_atomic(json, render_json(reports, ds.name, opts.mode, m.to_json(), ds.skipped));
                std::cout << csv.string() << '\n' << json.string() << '\n';
            }
        } else if (*kern) {
            std::vector<Axis> axes;
            if (k_axis == "both") axes = {Axis::X, Axis::Y};
            else axes = {parse_axis(k_axis)};
            for (std::size_t i = 0; i < axes.size(); ++i) {
                if (i) std::cout << '\n';
                if (k_family == "extended" || k_family == "sobel" || k_family == "ext") {
                    std::cout << kernel_dump(extended_sobel(k_size, axes[i]));
                } else if (auto fam = parse_comparison_family(k_family)) {
                    std::cout << kernel_dump(comparison_kernel(*registry.get(), *fam, axes[i]));
                } else {
                    throw UsageError("unknown kernel family '" + k_family + "'");
                }
            }
        }
    } catch (const Error& e) {
        std::cerr << "edgekit: " << e.what() << '\n';
        return e.exit_code();
    } catch (const fs::filesystem_error& e) {
        std::cerr << "edgekit: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "edgekit: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
