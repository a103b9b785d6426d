// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_IMAGE_IO_HPP
#define LAYERGEN_IMAGE_IO_HPP

#include <filesystem>
#include <stdexcept>

#include "layergen/video.hpp"

namespace layergen {

class ImageIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 8-bit PNG round trip. Values are clamped to [0,1] and quantized with
// round(v * 255) on write, mapped back as v / 255 on read.
void write_png(const std::filesystem::path& path, const Frame<3>& frame);
void write_png(const std::filesystem::path& path, const Frame<4>& frame);
void write_png(const std::filesystem::path& path, const Frame<1>& frame);

Frame<3> read_png_rgb(const std::filesystem::path& path);
Frame<4> read_png_rgba(const std::filesystem::path& path);
Frame<1> read_png_gray(const std::filesystem::path& path);

}  // namespace layergen

#endif
