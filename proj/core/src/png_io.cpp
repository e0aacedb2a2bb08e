#include "uedge/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "uedge/error.hpp"

namespace uedge::png {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;   // 1 or 3
    int bit_depth = 0;  // 8 or 16
    std::vector<uint16_t> pixels;  // interleaved, native values
};

Decoded decode(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open PNG for reading: " + path);

    png_structp pngp = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!pngp) throw IoError("png_create_read_struct failed");
    png_infop infop = png_create_info_struct(pngp);
    if (!infop) {
        png_destroy_read_struct(&pngp, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> raw;
    if (setjmp(png_jmpbuf(pngp))) {
        png_destroy_read_struct(&pngp, &infop, nullptr);
        throw IoError("failed to decode PNG: " + path);
    }

    png_init_io(pngp, fp.get());
    png_read_info(pngp, infop);

    png_uint_32 w = 0, h = 0;
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(pngp, infop, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(pngp);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(pngp);
    if (png_get_valid(pngp, infop, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(pngp);
    png_set_strip_alpha(pngp);
    png_read_update_info(pngp, infop);

    png_get_IHDR(pngp, infop, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    const int channels = png_get_channels(pngp, infop);
    const size_t stride = png_get_rowbytes(pngp, infop);

    raw.resize(stride * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = raw.data() + y * stride;
    png_read_image(pngp, row_ptrs.data());
    png_read_end(pngp, nullptr);
    png_destroy_read_struct(&pngp, &infop, nullptr);

    Decoded out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.channels = channels;
    out.bit_depth = bit_depth;
    out.pixels.resize(static_cast<size_t>(w) * h * channels);
    if (bit_depth == 8) {
        for (size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] = raw[i];
    } else if (bit_depth == 16) {
        // PNG stores 16-bit samples big-endian.
        for (size_t i = 0; i < out.pixels.size(); ++i) {
            out.pixels[i] = static_cast<uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
        }
    } else {
        throw IoError("unsupported PNG bit depth in " + path);
    }
    return out;
}

void encode(const std::string& path, int width, int height, int channels, int bit_depth,
            const std::vector<uint16_t>& pixels) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open PNG for writing: " + path);

    png_structp pngp = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!pngp) throw IoError("png_create_write_struct failed");
    png_infop infop = png_create_info_struct(pngp);
    if (!infop) {
        png_destroy_write_struct(&pngp, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<png_byte> raw;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(pngp))) {
        png_destroy_write_struct(&pngp, &infop);
        throw IoError("failed to encode PNG: " + path);
    }

    png_init_io(pngp, fp.get());
    const int color_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(pngp, infop, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(pngp, infop);

    const size_t n = static_cast<size_t>(width) * height * channels;
    const size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
    raw.resize(n * bytes_per_sample);
    if (bit_depth == 8) {
        for (size_t i = 0; i < n; ++i) raw[i] = static_cast<png_byte>(pixels[i] & 0xff);
    } else {
        for (size_t i = 0; i < n; ++i) {
            raw[2 * i] = static_cast<png_byte>(pixels[i] >> 8);
            raw[2 * i + 1] = static_cast<png_byte>(pixels[i] & 0xff);
        }
    }
    const size_t stride = static_cast<size_t>(width) * channels * bytes_per_sample;
    row_ptrs.resize(height);
    for (int y = 0; y < height; ++y) row_ptrs[y] = raw.data() + y * stride;
    png_write_image(pngp, row_ptrs.data());
    png_write_end(pngp, nullptr);
    png_destroy_write_struct(&pngp, &infop);
}

}  // namespace

BinaryMap read_mask(const std::string& path) {
    const Decoded d = decode(path);
    if (d.channels != 1 || d.bit_depth != 8) {
        throw InvalidInput("annotation mask must be 8-bit grayscale: " + path);
    }
    BinaryMap m(d.height, d.width);
    for (size_t i = 0; i < d.pixels.size(); ++i) {
        if (d.pixels[i] == 0) {
            m[i] = 0;
        } else if (d.pixels[i] == 255) {
            m[i] = 1;
        } else {
            throw InvalidInput("annotation mask has non-binary value in " + path);
        }
    }
    return m;
}

void write_mask(const std::string& path, const BinaryMap& mask) {
    std::vector<uint16_t> px(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) px[i] = mask[i] ? 255 : 0;
    encode(path, mask.width(), mask.height(), 1, 8, px);
}

Tensor read_rgb(const std::string& path) {
    const Decoded d = decode(path);
    if (d.bit_depth != 8) throw InvalidInput("expected 8-bit image: " + path);
    Tensor t(3, d.height, d.width);
    const size_t plane = static_cast<size_t>(d.height) * d.width;
    for (size_t i = 0; i < plane; ++i) {
        if (d.channels == 1) {
            const double v = d.pixels[i] / 255.0;
            t[i] = v;
            t[plane + i] = v;
            t[2 * plane + i] = v;
        } else {
            t[i] = d.pixels[3 * i] / 255.0;
            t[plane + i] = d.pixels[3 * i + 1] / 255.0;
            t[2 * plane + i] = d.pixels[3 * i + 2] / 255.0;
        }
    }
    return t;
}

void write_rgb(const std::string& path, const Tensor& image) {
    if (image.channels() != 3) throw InvalidInput("write_rgb: expected 3 channels");
    const size_t plane = static_cast<size_t>(image.height()) * image.width();
    std::vector<uint16_t> px(plane * 3);
    auto quant = [](double v) {
        const double c = std::clamp(v, 0.0, 1.0);
        return static_cast<uint16_t>(std::lround(c * 255.0));
    };
    for (size_t i = 0; i < plane; ++i) {
        px[3 * i] = quant(image[i]);
        px[3 * i + 1] = quant(image[plane + i]);
        px[3 * i + 2] = quant(image[2 * plane + i]);
    }
    encode(path, image.width(), image.height(), 3, 8, px);
}

MapD read_gray(const std::string& path) {
    const Decoded d = decode(path);
    if (d.channels != 1) throw InvalidInput("expected grayscale image: " + path);
    const double denom = d.bit_depth == 16 ? 65535.0 : 255.0;
    MapD m(d.height, d.width);
    for (size_t i = 0; i < d.pixels.size(); ++i) m[i] = d.pixels[i] / denom;
    return m;
}

void write_gray16(const std::string& path, const MapD& map, double scale_max) {
    if (scale_max <= 0) throw InvalidInput("write_gray16: scale_max must be positive");
    std::vector<uint16_t> px(map.size());
    for (size_t i = 0; i < map.size(); ++i) {
        const double v = std::clamp(map[i] / scale_max, 0.0, 1.0);
        px[i] = static_cast<uint16_t>(std::lround(v * 65535.0));
    }
    encode(path, map.width(), map.height(), 1, 16, px);
}

}  // namespace uedge::png
