/**
 * @file codec.cpp
 * @brief PNG (via libpng) and binary PNM codecs.
 */

#include "fabric/codec.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace fabric {

DecodeError::DecodeError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

namespace {

constexpr int kMaxSide = 1 << 15;

// =============================================================================
// PNG
// =============================================================================

struct PngReadState {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
    std::size_t error_offset;
    char message[256];
};

void png_read_bytes(png_structp png, png_bytep out, png_size_t len) {
    auto* s = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (len > s->size - s->pos) {
        s->error_offset = s->size;
        png_error(png, "unexpected end of PNG stream");
    }
    std::memcpy(out, s->data + s->pos, len);
    s->pos += len;
}

void png_read_error(png_structp png, png_const_charp msg) {
    auto* s = static_cast<PngReadState*>(png_get_error_ptr(png));
    std::snprintf(s->message, sizeof(s->message), "%s", msg);
    if (s->error_offset == static_cast<std::size_t>(-1)) s->error_offset = s->pos;
    png_longjmp(png, 1);
}

void png_quiet_warning(png_structp, png_const_charp) {}

// No automatic objects with non-trivial destructors are created after setjmp.
bool decode_png_raw(PngReadState& s, std::vector<std::uint8_t>& rgb, std::vector<png_bytep>& rows,
                    int& width, int& height) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &s, png_read_error, png_quiet_warning);
    if (png == nullptr) {
        std::snprintf(s.message, sizeof(s.message), "libpng initialization failed");
        s.error_offset = 0;
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        std::snprintf(s.message, sizeof(s.message), "libpng initialization failed");
        s.error_offset = 0;
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_user_limits(png, kMaxSide, kMaxSide);
    png_set_read_fn(png, &s, png_read_bytes);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const auto w = png_get_image_width(png, info);
    const auto h = png_get_image_height(png, info);
    if (png_get_rowbytes(png, info) != 3 * static_cast<std::size_t>(w)) {
        png_error(png, "unsupported PNG pixel layout");
    }
    rgb.resize(3 * static_cast<std::size_t>(w) * h);
    rows.resize(h);
    for (png_uint_32 r = 0; r < h; ++r) rows[r] = rgb.data() + 3 * static_cast<std::size_t>(w) * r;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    width = static_cast<int>(w);
    height = static_cast<int>(h);
    return true;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
    PngReadState s{bytes.data(), bytes.size(), 0, static_cast<std::size_t>(-1), {}};
    std::vector<std::uint8_t> rgb;
    std::vector<png_bytep> rows;
    int w = 0, h = 0;
    if (!decode_png_raw(s, rgb, rows, w, h)) {
        throw DecodeError(std::string("PNG: ") + s.message, s.error_offset);
    }
    return RgbImage(w, h, std::move(rgb));
}

struct PngWriteState {
    std::vector<std::uint8_t>* out;
    char message[256];
};

void png_write_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto* s = static_cast<PngWriteState*>(png_get_io_ptr(png));
    s->out->insert(s->out->end(), data, data + len);
}

void png_flush_noop(png_structp) {}

void png_write_error(png_structp png, png_const_charp msg) {
    auto* s = static_cast<PngWriteState*>(png_get_error_ptr(png));
    std::snprintf(s->message, sizeof(s->message), "%s", msg);
    png_longjmp(png, 1);
}

bool encode_png_raw(PngWriteState& s, const std::uint8_t* pixels, int width, int height, int channels,
                    std::vector<png_bytep>& rows) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &s, png_write_error, png_quiet_warning);
    if (png == nullptr) return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, &s, png_write_bytes, png_flush_noop);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    rows.resize(static_cast<std::size_t>(height));
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int r = 0; r < height; ++r) {
        rows[static_cast<std::size_t>(r)] = const_cast<png_bytep>(pixels + stride * r);
    }
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

std::vector<std::uint8_t> encode_png_channels(const std::uint8_t* pixels, int width, int height, int channels) {
    std::vector<std::uint8_t> out;
    PngWriteState s{&out, {}};
    std::vector<png_bytep> rows;
    if (!encode_png_raw(s, pixels, width, height, channels, rows)) {
        throw std::runtime_error(std::string("PNG encode failed: ") + s.message);
    }
    return out;
}

// =============================================================================
// PNM
// =============================================================================

class PnmReader {
public:
    explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const noexcept { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    int read_uint(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long long v = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > kMaxSide) throw DecodeError(std::string("PNM: ") + field + " too large", start);
            ++pos_;
        }
        if (pos_ == start) {
            throw DecodeError(std::string("PNM: expected ") + field, start);
        }
        return static_cast<int>(v);
    }

    void expect_single_whitespace() {
        if (pos_ >= bytes_.size()) throw DecodeError("PNM: truncated header", pos_);
        const auto c = bytes_[pos_];
        if (!(c == ' ' || c == '\t' || c == '\n' || c == '\r')) {
            throw DecodeError("PNM: expected whitespace before raster", pos_);
        }
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

RgbImage decode_pnm(std::span<const std::uint8_t> bytes) {
    const bool gray = bytes[1] == '5';
    PnmReader rd(bytes);
    const int width = rd.read_uint("width");
    const int height = rd.read_uint("height");
    if (width < 1 || height < 1) throw DecodeError("PNM: zero dimension", rd.pos());
    const std::size_t maxval_at = rd.pos();
    const int maxval = rd.read_uint("maxval");
    if (maxval != 255) throw DecodeError("PNM: only maxval 255 is supported", maxval_at);
    rd.expect_single_whitespace();

    const std::size_t channels = gray ? 1 : 3;
    const std::size_t need = channels * static_cast<std::size_t>(width) * height;
    const std::size_t avail = bytes.size() - rd.pos();
    if (avail < need) throw DecodeError("PNM: truncated raster", bytes.size());

    const std::uint8_t* raster = bytes.data() + rd.pos();
    std::vector<std::uint8_t> rgb(3 * static_cast<std::size_t>(width) * height);
    if (gray) {
        for (std::size_t i = 0; i < need; ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = raster[i];
    } else {
        std::copy(raster, raster + need, rgb.begin());
    }
    return RgbImage(width, height, std::move(rgb));
}

std::vector<std::uint8_t> encode_pnm(char magic, const std::uint8_t* data, std::size_t len, int width,
                                     int height) {
    const std::string header =
        std::string("P") + magic + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), data, data + len);
    return out;
}

} // namespace

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (bytes.size() >= 8 && std::equal(kPngSig, kPngSig + 8, bytes.begin())) {
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
        return decode_pnm(bytes);
    }
    // Report the first byte that fails to match either signature.
    std::size_t off = 0;
    if (!bytes.empty() && bytes[0] == 'P') off = 1;
    else if (!bytes.empty() && bytes[0] == kPngSig[0]) {
        while (off < bytes.size() && off < 8 && bytes[off] == kPngSig[off]) ++off;
    }
    throw DecodeError("unrecognized image format (expected PNG, P5 or P6)", off);
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    return encode_png_channels(img.pixels().data(), img.width(), img.height(), 3);
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    const auto bytes = to_bytes(img);
    return encode_png_channels(bytes.data(), img.cols(), img.rows(), 1);
}

std::vector<std::uint8_t> encode_png(const BinaryMask& mask) {
    std::vector<std::uint8_t> bytes(mask.size());
    std::transform(mask.bits().begin(), mask.bits().end(), bytes.begin(),
                   [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 255 : 0); });
    return encode_png_channels(bytes.data(), mask.cols(), mask.rows(), 1);
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
    return encode_pnm('6', img.pixels().data(), img.pixels().size(), img.width(), img.height());
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const auto bytes = to_bytes(img);
    return encode_pnm('5', bytes.data(), bytes.size(), img.cols(), img.rows());
}

std::vector<std::uint8_t> encode_pgm(const BinaryMask& mask) {
    std::vector<std::uint8_t> bytes(mask.size());
    std::transform(mask.bits().begin(), mask.bits().end(), bytes.begin(),
                   [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 255 : 0); });
    return encode_pnm('5', bytes.data(), bytes.size(), mask.cols(), mask.rows());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

GrayImage load_gray(const std::filesystem::path& path) {
    return to_grayscale(decode_image(read_file(path)));
}

void save_gray(const std::filesystem::path& path, const GrayImage& img) {
    write_file(path, path.extension() == ".pgm" ? encode_pgm(img) : encode_png(img));
}

void save_mask(const std::filesystem::path& path, const BinaryMask& mask) {
    write_file(path, path.extension() == ".pgm" ? encode_pgm(mask) : encode_png(mask));
}

BinaryMask load_mask(const std::filesystem::path& path) {
    const RgbImage rgb = decode_image(read_file(path));
    BinaryMask m(rgb.height(), rgb.width());
    for (int r = 0; r < rgb.height(); ++r) {
        for (int c = 0; c < rgb.width(); ++c) {
            const auto* p = rgb.at(r, c);
            m.set(r, c, (p[0] | p[1] | p[2]) != 0);
        }
    }
    return m;
}

} // namespace fabric
