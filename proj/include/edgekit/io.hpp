#pragma once

// Raster I/O: PGM (P2/P5, maxval <= 255) and 8-bit PNG through libpng.
// Writers quantize by round-half-up and never leave a partial file behind.

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "edgekit/error.hpp"
#include "edgekit/image.hpp"

namespace edgekit {

enum class PgmEncoding { Binary, Ascii };

/// 8-bit raster straight off disk before any intensity semantics apply.
struct Raster8 {
    std::size_t width = 0;
    std::size_t height = 0;
    int channels = 1;  // 1 = gray, 3 = RGB
    std::vector<std::uint8_t> samples;
};

namespace detail {

inline std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

/// Writes to a sibling temp file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

class PnmTokenizer {
public:
    explicit PnmTokenizer(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    // Header integers are separated by whitespace and may be interleaved with '#' comments.
    long next_int(const char* field) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw DataError(std::string("corrupt PGM header: missing ") + field);
        }
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > (1L << 30)) throw DataError(std::string("corrupt PGM header: huge ") + field);
            ++pos_;
        }
        return value;
    }

    // Exactly one whitespace byte separates the header from P5 raster data.
    std::size_t raster_start() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw DataError("corrupt PGM header: no separator before raster data");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 2;
};

inline Raster8 decode_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw DataError("not a P2/P5 PGM file");
    }
    const bool ascii = bytes[1] == '2';
    PnmTokenizer tok(bytes);
    const long width = tok.next_int("width");
    const long height = tok.next_int("height");
    const long maxval = tok.next_int("maxval");
    if (width <= 0 || height <= 0) throw DataError("corrupt PGM header: zero dimension");
    if (maxval <= 0 || maxval > 255) {
        throw DataError("unsupported PGM maxval " + std::to_string(maxval) + " (8-bit only)");
    }

    Raster8 r;
    r.width = static_cast<std::size_t>(width);
    r.height = static_cast<std::size_t>(height);
    r.samples.resize(r.width * r.height);
    const auto rescale = [maxval](long v) -> std::uint8_t {
        if (v > maxval) throw DataError("PGM sample exceeds maxval");
        if (maxval == 255) return static_cast<std::uint8_t>(v);
        return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    };

    if (ascii) {
        for (auto& s : r.samples) s = rescale(tok.next_int("sample"));
    } else {
        const std::size_t start = tok.raster_start();
        if (bytes.size() < start || bytes.size() - start < r.samples.size()) {
            throw DataError("truncated PGM raster: expected " + std::to_string(r.samples.size()) +
                            " bytes");
        }
        for (std::size_t i = 0; i < r.samples.size(); ++i) r.samples[i] = rescale(bytes[start + i]);
    }
    return r;
}

inline std::string encode_pgm(const Raster8& r, PgmEncoding encoding) {
    std::ostringstream out;
    if (encoding == PgmEncoding::Binary) {
        out << "P5\n" << r.width << ' ' << r.height << "\n255\n";
        out.write(reinterpret_cast<const char*>(r.samples.data()),
                  static_cast<std::streamsize>(r.samples.size()));
    } else {
        out << "P2\n" << r.width << ' ' << r.height << "\n255\n";
        for (std::size_t y = 0; y < r.height; ++y) {
            for (std::size_t x = 0; x < r.width; ++x) {
                out << static_cast<int>(r.samples[y * r.width + x])
                    << (x + 1 == r.width ? '\n' : ' ');
            }
        }
    }
    return out.str();
}

struct PngReadState {
    const std::vector<std::uint8_t>* bytes;
    std::size_t pos;
};

inline void png_read_from_memory(png_structp png, png_bytep out, png_size_t length) {
    auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (state->bytes->size() - state->pos < length) png_error(png, "truncated PNG stream");
    std::copy_n(state->bytes->data() + state->pos, length, out);
    state->pos += length;
}

// libpng reports errors by longjmp; the message is parked here and rethrown as
// a C++ exception once control is back in our frame.
struct PngErrorSink {
    char message[256] = {};
};

inline void png_error_longjmp(png_structp png, png_const_charp msg) {
    auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
    std::snprintf(sink->message, sizeof sink->message, "%s", msg ? msg : "unknown error");
    png_longjmp(png, 1);
}

inline void png_warning_ignore(png_structp, png_const_charp) {}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngErrorSink sink;
    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_longjmp,
                                     png_warning_ignore);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw DataError("libpng initialization failed");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;
};

inline Raster8 decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw DataError("not a PNG file");
    }
    PngReader reader;
    PngReadState state{&bytes, 0};
    Raster8 r;
    std::vector<png_bytep> rows;
    bool bad_layout = false;

    if (setjmp(png_jmpbuf(reader.png))) {
        throw DataError(std::string("PNG decode failed: ") + reader.sink.message);
    }
    png_structp png = reader.png;
    png_infop info = reader.info;
    png_set_read_fn(png, &state, png_read_from_memory);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth == 16) {
        std::snprintf(reader.sink.message, sizeof reader.sink.message, "16-bit PNG is not supported");
        png_longjmp(png, 1);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    r.width = png_get_image_width(png, info);
    r.height = png_get_image_height(png, info);
    r.channels = png_get_channels(png, info);
    const std::size_t stride = r.width * static_cast<std::size_t>(r.channels);
    bad_layout = (r.channels != 1 && r.channels != 3) || png_get_rowbytes(png, info) != stride;
    if (!bad_layout) {
        r.samples.resize(stride * r.height);
        rows.resize(r.height);
        for (std::size_t y = 0; y < r.height; ++y) rows[y] = r.samples.data() + y * stride;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    }
    if (bad_layout) throw DataError("unsupported PNG channel layout");
    return r;
}

inline void png_write_to_string(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), length);
}

inline void png_flush_noop(png_structp) {}

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngErrorSink sink;
    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_longjmp,
                                      png_warning_ignore);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw DataError("libpng initialization failed");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

inline std::string encode_png(const Raster8& r) {
    std::string out;
    PngWriter writer;
    if (setjmp(png_jmpbuf(writer.png))) {
        throw DataError(std::string("PNG encode failed: ") + writer.sink.message);
    }
    png_structp png = writer.png;
    png_infop info = writer.info;
    png_set_write_fn(png, &out, png_write_to_string, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(r.width), static_cast<png_uint_32>(r.height),
                 8, r.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = r.width * static_cast<std::size_t>(r.channels);
    for (std::size_t y = 0; y < r.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(r.samples.data() + y * stride));
    }
    png_write_end(png, nullptr);
    return out;
}

inline std::uint8_t quantize(double v) {
    return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, kMaxIntensity) + 0.5));
}

}  // namespace detail

/// Decodes a PGM or PNG file by signature, not by extension.
inline Raster8 read_raster(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    try {
        if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return detail::decode_png(bytes);
        if (bytes.size() >= 2 && bytes[0] == 'P') return detail::decode_pgm(bytes);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    throw DataError(path.string() + ": unsupported image format");
}

inline void write_raster(const std::filesystem::path& path, const Raster8& raster,
                         PgmEncoding encoding = PgmEncoding::Binary) {
    const bool png = detail::lower_extension(path) == ".png";
    if (!png && raster.channels != 1) throw UsageError("PGM output must be single-channel");
    detail::write_file_atomic(path, png ? detail::encode_png(raster)
                                        : detail::encode_pgm(raster, encoding));
}

/// Loads a gray or RGB raster as a GrayImage; RGB goes through to_grayscale.
inline GrayImage load_image(const std::filesystem::path& path) {
    Raster8 r = read_raster(path);
    if (r.channels == 1) {
        return GrayImage(r.width, r.height, std::vector<double>(r.samples.begin(), r.samples.end()));
    }
    std::vector<Rgb> rgb(r.width * r.height);
    for (std::size_t i = 0; i < rgb.size(); ++i) {
        rgb[i] = {r.samples[3 * i], r.samples[3 * i + 1], r.samples[3 * i + 2]};
    }
    return to_grayscale(rgb, r.width, r.height);
}

/// Loads a boundary mask; any nonzero pixel counts as a boundary pixel.
inline EdgeMap load_edge_map(const std::filesystem::path& path) {
    const GrayImage img = load_image(path);
    EdgeMap map(img.width(), img.height());
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x) map.set(x, y, img(x, y) > 0.0);
    return map;
}

inline void save_image(const std::filesystem::path& path, const GrayImage& image,
                       PgmEncoding encoding = PgmEncoding::Binary) {
    Raster8 r{image.width(), image.height(), 1, {}};
    r.samples.reserve(image.pixels().size());
    for (double v : image.pixels()) r.samples.push_back(detail::quantize(v));
    write_raster(path, r, encoding);
}

inline void save_image(const std::filesystem::path& path, const EdgeMap& map,
                       PgmEncoding encoding = PgmEncoding::Binary) {
    Raster8 r{map.width(), map.height(), 1, {map.pixels().begin(), map.pixels().end()}};
    write_raster(path, r, encoding);
}

}  // namespace edgekit
