// SPDX-License-Identifier: Apache-2.0
#include "layergen/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace layergen {

namespace {

uint8_t quantize(double v) {
    double c = std::clamp(v, 0.0, 1.0);
    return static_cast<uint8_t>(std::lround(c * 255.0));
}

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

void write_png_bytes(const std::filesystem::path& path, int h, int w, int channels,
                     const std::vector<uint8_t>& bytes) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) {
        throw ImageIoError("cannot open for writing: " + path.string());
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageIoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw ImageIoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ImageIoError("libpng write error: " + path.string());
    }
    png_init_io(png, fp.get());
    int color_type = PNG_COLOR_TYPE_GRAY;
    if (channels == 3) color_type = PNG_COLOR_TYPE_RGB;
    if (channels == 4) color_type = PNG_COLOR_TYPE_RGBA;
    png_set_IHDR(png, info, w, h, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) {
        rows[y] = const_cast<png_bytep>(bytes.data() + static_cast<size_t>(y) * w * channels);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<uint8_t> read_png_bytes(const std::filesystem::path& path, int want_channels,
                                    int& h, int& w) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) {
        throw ImageIoError("cannot open for reading: " + path.string());
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageIoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw ImageIoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageIoError("libpng read error: " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_16(png);
    if (want_channels == 1) {
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
        png_set_strip_alpha(png);
    } else {
        png_set_gray_to_rgb(png);
        if (want_channels == 4) {
            png_set_add_alpha(png, 0xFF, PNG_FILLER_AFTER);
        } else {
            png_set_strip_alpha(png);
        }
    }
    png_read_update_info(png, info);

    h = static_cast<int>(png_get_image_height(png, info));
    w = static_cast<int>(png_get_image_width(png, info));
    int channels = png_get_channels(png, info);
    if (channels != want_channels) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageIoError("unexpected channel count in " + path.string());
    }
    std::vector<uint8_t> bytes(static_cast<size_t>(h) * w * channels);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) {
        rows[y] = bytes.data() + static_cast<size_t>(y) * w * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return bytes;
}

template <int CH>
void write_frame(const std::filesystem::path& path, const Frame<CH>& frame) {
    std::vector<uint8_t> bytes(frame.data.size());
    for (size_t i = 0; i < frame.data.size(); ++i) {
        bytes[i] = quantize(frame.data[i]);
    }
    write_png_bytes(path, frame.h, frame.w, CH, bytes);
}

template <int CH>
Frame<CH> read_frame(const std::filesystem::path& path) {
    int h = 0, w = 0;
    std::vector<uint8_t> bytes = read_png_bytes(path, CH, h, w);
    Frame<CH> out(h, w);
    for (size_t i = 0; i < bytes.size(); ++i) {
        out.data[i] = bytes[i] / 255.0;
    }
    return out;
}

}  // namespace

void write_png(const std::filesystem::path& path, const Frame<3>& frame) { write_frame(path, frame); }
void write_png(const std::filesystem::path& path, const Frame<4>& frame) { write_frame(path, frame); }
void write_png(const std::filesystem::path& path, const Frame<1>& frame) { write_frame(path, frame); }

Frame<3> read_png_rgb(const std::filesystem::path& path) { return read_frame<3>(path); }
Frame<4> read_png_rgba(const std::filesystem::path& path) { return read_frame<4>(path); }
Frame<1> read_png_gray(const std::filesystem::path& path) { return read_frame<1>(path); }

}  // namespace layergen
