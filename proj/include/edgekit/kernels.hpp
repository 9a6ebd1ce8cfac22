#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgekit/error.hpp"

namespace edgekit {

enum class Axis { X, Y };

inline std::string_view to_string(Axis axis) { return axis == Axis::X ? "x" : "y"; }

inline Axis parse_axis(std::string_view text) {
    if (text == "x" || text == "X") return Axis::X;
    if (text == "y" || text == "Y") return Axis::Y;
    throw UsageError("unknown axis '" + std::string(text) + "' (expected x or y)");
}

/// One nonzero coefficient, as an offset from the kernel centre.
struct Tap {
    int dy;
    int dx;
    double weight;
};

/// Square, odd-sized gradient kernel with an axis tag.
///
/// Construction validates the gradient-kernel invariants: odd size >= 3, zero
/// coefficient sum, and antisymmetry under the mirror that matches the axis
/// (column j <-> size-1-j for X, row i <-> size-1-i for Y).
class Kernel {
public:
    Kernel(std::string name, Axis axis, std::size_t size, std::vector<double> coeffs)
        : name_(std::move(name)), axis_(axis), size_(size), coeffs_(std::move(coeffs)) {
        validate();
    }

    const std::string& name() const noexcept { return name_; }
    Axis axis() const noexcept { return axis_; }
    std::size_t size() const noexcept { return size_; }
    int radius() const noexcept { return static_cast<int>(size_ / 2); }

    double operator()(std::size_t row, std::size_t col) const { return coeffs_[row * size_ + col]; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Nonzero coefficients in row-major order.
    std::vector<Tap> taps() const {
        std::vector<Tap> out;
        const int c = radius();
        for (std::size_t i = 0; i < size_; ++i)
            for (std::size_t j = 0; j < size_; ++j)
                if (double w = (*this)(i, j); w != 0.0)
                    out.push_back({static_cast<int>(i) - c, static_cast<int>(j) - c, w});
        return out;
    }

    std::size_t nonzero_count() const {
        return static_cast<std::size_t>(
            std::count_if(coeffs_.begin(), coeffs_.end(), [](double v) { return v != 0.0; }));
    }

    /// Same coefficients, different label.
    Kernel renamed(std::string name) const { return Kernel(std::move(name), axis_, size_, coeffs_); }

    friend bool operator==(const Kernel& a, const Kernel& b) {
        return a.axis_ == b.axis_ && a.size_ == b.size_ && a.coeffs_ == b.coeffs_;
    }

private:
    void validate() const {
        if (size_ < 3 || size_ % 2 == 0) {
            throw DataError("kernel '" + name_ + "': size " + std::to_string(size_) +
                            " must be odd and >= 3");
        }
        if (coeffs_.size() != size_ * size_) {
            throw DataError("kernel '" + name_ + "': expected " + std::to_string(size_ * size_) +
                            " coefficients, got " + std::to_string(coeffs_.size()));
        }
        double sum = 0.0, scale = 0.0;
        for (double v : coeffs_) {
            if (!std::isfinite(v)) throw DataError("kernel '" + name_ + "': non-finite coefficient");
            sum += v;
            scale = std::max(scale, std::abs(v));
        }
        if (std::abs(sum) > 1e-12 * std::max(1.0, scale)) {
            throw DataError("kernel '" + name_ + "': coefficients sum to " + std::to_string(sum) +
                            ", expected 0");
        }
        for (std::size_t i = 0; i < size_; ++i) {
            for (std::size_t j = 0; j < size_; ++j) {
                const double v = (*this)(i, j);
                const double mirrored =
                    axis_ == Axis::X ? (*this)(i, size_ - 1 - j) : (*this)(size_ - 1 - i, j);
                if (v != -mirrored) {
                    throw DataError("kernel '" + name_ + "': not antisymmetric under " +
                                    (axis_ == Axis::X ? "horizontal" : "vertical") + " mirror");
                }
            }
        }
    }

    std::string name_;
    Axis axis_;
    std::size_t size_;
    std::vector<double> coeffs_;
};

/// Classical Sobel pair; positive weights on the left column (X) and top row (Y).
inline Kernel sobel_3x3(Axis axis) {
    if (axis == Axis::X) return Kernel("sobel3", Axis::X, 3, {1, 0, -1, 2, 0, -2, 1, 0, -1});
    return Kernel("sobel3", Axis::Y, 3, {1, 2, 1, 0, 0, 0, -1, -2, -1});
}

inline constexpr std::size_t kMinExtendedSize = 3;
inline constexpr std::size_t kMaxExtendedSize = 15;

inline bool is_valid_extended_size(std::size_t size) {
    return size >= kMinExtendedSize && size <= kMaxExtendedSize && size % 2 == 1;
}

/// Zero-dilated Sobel: the nine 3x3 coefficients placed on rows/columns
/// {0, d, 2d} with d = (size-1)/2; every other entry is 0.
inline Kernel extended_sobel(std::size_t size, Axis axis) {
    if (!is_valid_extended_size(size)) {
        throw UsageError("extended Sobel size must be one of 3,5,...,15; got " +
                         std::to_string(size));
    }
    const Kernel base = sobel_3x3(axis);
    const std::size_t d = (size - 1) / 2;
    std::vector<double> coeffs(size * size, 0.0);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) coeffs[(r * d) * size + c * d] = base(r, c);
    return Kernel("extended" + std::to_string(size), axis, size, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Text form shared by the registry file and the `kernels` dump:
//
//   # comment
//   <name> <x|y> <size>
//   <size rows of size whitespace-separated coefficients>
// ---------------------------------------------------------------------------

inline std::string format_coefficient(double v) {
    if (v == std::trunc(v) && std::abs(v) < 1e15) {
        std::ostringstream os;
        os << static_cast<long long>(v);
        return os.str();
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline std::string kernel_dump(const Kernel& kernel) {
    std::vector<std::string> cells;
    std::size_t widest = 0;
    for (double v : kernel.coeffs()) {
        cells.push_back(format_coefficient(v));
        widest = std::max(widest, cells.back().size());
    }
    std::ostringstream out;
    out << kernel.name() << ' ' << to_string(kernel.axis()) << ' ' << kernel.size() << '\n';
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        for (std::size_t j = 0; j < kernel.size(); ++j) {
            const std::string& cell = cells[i * kernel.size() + j];
            if (j) out << ' ';
            out << std::string(widest - cell.size(), ' ') << cell;
        }
        out << '\n';
    }
    return out.str();
}

/// Parses every kernel record in `text`. `source` labels error messages.
inline std::vector<Kernel> parse_kernels(std::string_view text, const std::string& source = "<text>") {
    std::vector<std::string> tokens;
    std::vector<std::size_t> token_lines;
    {
        std::istringstream in{std::string(text)};
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream words(line);
            std::string w;
            while (words >> w) {
                tokens.push_back(w);
                token_lines.push_back(line_no);
            }
        }
    }

    const auto fail = [&](std::size_t at, const std::string& msg) -> DataError {
        const std::size_t line = at < token_lines.size() ? token_lines[at] : token_lines.empty() ? 0 : token_lines.back();
        return DataError(source + ":" + std::to_string(line) + ": " + msg);
    };
    const auto number = [&](std::size_t at) {
        double v = 0.0;
        const std::string& t = tokens[at];
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) throw fail(at, "bad coefficient '" + t + "'");
        return v;
    };

    std::vector<Kernel> kernels;
    std::size_t pos = 0;
    while (pos < tokens.size()) {
        if (tokens.size() - pos < 3) throw fail(pos, "incomplete kernel header");
        const std::string name = tokens[pos];
        Axis axis;
        try {
            axis = parse_axis(tokens[pos + 1]);
        } catch (const UsageError&) {
            throw fail(pos + 1, "bad axis '" + tokens[pos + 1] + "'");
        }
        std::size_t size = 0;
        {
            const std::string& t = tokens[pos + 2];
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), size);
            if (ec != std::errc() || ptr != t.data() + t.size() || size == 0 || size > 99) {
                throw fail(pos + 2, "bad kernel size '" + t + "'");
            }
        }
        pos += 3;
        if (tokens.size() - pos < size * size) throw fail(pos, "kernel '" + name + "' is truncated");
        std::vector<double> coeffs;
        coeffs.reserve(size * size);
        for (std::size_t k = 0; k < size * size; ++k) coeffs.push_back(number(pos + k));
        try {
            kernels.emplace_back(name, axis, size, std::move(coeffs));
        } catch (const DataError& e) {
            throw fail(pos, e.what());
        }
        pos += size * size;
    }
    return kernels;
}

/// Fixed-size comparison filters loaded from the coefficient data file.
enum class ComparisonFamily { Sobel5Gupta, Prewitt5, ModPrewitt5, Scharr5 };

inline std::string_view registry_name(ComparisonFamily family) {
    switch (family) {
        case ComparisonFamily::Sobel5Gupta: return "sobel5_gupta";
        case ComparisonFamily::Prewitt5: return "prewitt5";
        case ComparisonFamily::ModPrewitt5: return "mod_prewitt5";
        case ComparisonFamily::Scharr5: return "scharr5";
    }
    return "";
}

inline std::optional<ComparisonFamily> parse_comparison_family(std::string_view text) {
    for (auto f : {ComparisonFamily::Sobel5Gupta, ComparisonFamily::Prewitt5,
                   ComparisonFamily::ModPrewitt5, ComparisonFamily::Scharr5}) {
        if (text == registry_name(f)) return f;
    }
    if (text == "sobel5" || text == "SOBEL5_GUPTA") return ComparisonFamily::Sobel5Gupta;
    if (text == "PREWITT5") return ComparisonFamily::Prewitt5;
    if (text == "mprewitt5" || text == "MOD_PREWITT5") return ComparisonFamily::ModPrewitt5;
    if (text == "SCHARR5") return ComparisonFamily::Scharr5;
    return std::nullopt;
}

class KernelRegistry {
public:
    KernelRegistry() = default;

    static KernelRegistry from_text(std::string_view text, const std::string& source = "<text>") {
        KernelRegistry reg;
        for (Kernel& k : parse_kernels(text, source)) {
            auto key = std::make_pair(k.name(), k.axis());
            if (reg.kernels_.contains(key)) {
                throw DataError(source + ": duplicate kernel '" + k.name() + "' axis " +
                                std::string(to_string(k.axis())));
            }
            reg.kernels_.emplace(std::move(key), std::move(k));
        }
        return reg;
    }

    static KernelRegistry from_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open kernel registry '" + path.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return from_text(buf.str(), path.string());
    }

    const Kernel& get(std::string_view name, Axis axis) const {
        auto it = kernels_.find(std::make_pair(std::string(name), axis));
        if (it == kernels_.end()) {
            throw DataError("kernel registry has no entry '" + std::string(name) + "' axis " +
                            std::string(to_string(axis)));
        }
        return it->second;
    }

    bool empty() const noexcept { return kernels_.empty(); }
    std::size_t size() const noexcept { return kernels_.size(); }

    std::vector<const Kernel*> all() const {
        std::vector<const Kernel*> out;
        for (const auto& [key, k] : kernels_) out.push_back(&k);
        return out;
    }

private:
    std::map<std::pair<std::string, Axis>, Kernel> kernels_;
};

inline Kernel comparison_kernel(const KernelRegistry& registry, ComparisonFamily family, Axis axis) {
    const Kernel& k = registry.get(registry_name(family), axis);
    if (k.size() != 5) {
        throw DataError("registry kernel '" + k.name() + "' must be 5x5, found " +
                        std::to_string(k.size()));
    }
    return k;
}

/// A gradient filter pair: either the zero-dilated Sobel family at a given
/// size or one of the registry-backed comparison filters.
struct FilterSpec {
    enum class Kind { Extended, Comparison };
    Kind kind = Kind::Extended;
    std::size_t size = 3;
    ComparisonFamily family = ComparisonFamily::Sobel5Gupta;

    /// Stable identifier used in reports and CLI lists ("ext7", "scharr5", ...).
    std::string id() const {
        if (kind == Kind::Extended) return "ext" + std::to_string(size);
        return std::string(registry_name(family));
    }

    /// Accepts "ext<N>", "extended<N>", "sobel<N>" for the dilated family and
    /// registry names for comparison filters.
    static FilterSpec parse(std::string_view text) {
        if (auto fam = parse_comparison_family(text)) return {Kind::Comparison, 5, *fam};
        for (std::string_view prefix : {"extended", "ext", "sobel"}) {
            if (text.starts_with(prefix)) {
                std::string_view digits = text.substr(prefix.size());
                std::size_t n = 0;
                auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
                if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
                    if (!is_valid_extended_size(n)) {
                        throw UsageError("filter '" + std::string(text) +
                                         "': extended size must be odd in [3, 15]");
                    }
                    return {Kind::Extended, n, {}};
                }
            }
        }
        throw UsageError("unknown filter '" + std::string(text) + "'");
    }

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

struct KernelPair {
    Kernel x;
    Kernel y;
};

/// Resolves a filter; the registry is consulted only for comparison filters.
inline KernelPair resolve_filter(const FilterSpec& spec, const KernelRegistry* registry) {
    if (spec.kind == FilterSpec::Kind::Extended) {
        return {extended_sobel(spec.size, Axis::X), extended_sobel(spec.size, Axis::Y)};
    }
    if (!registry || registry->empty()) {
        throw DataError("filter '" + spec.id() + "' needs the comparison kernel registry file");
    }
    return {comparison_kernel(*registry, spec.family, Axis::X),
            comparison_kernel(*registry, spec.family, Axis::Y)};
}

}  // namespace edgekit
