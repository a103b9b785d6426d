// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_VIDEO_HPP
#define LAYERGEN_VIDEO_HPP

#include <cstddef>
#include <vector>

namespace layergen {

// Single frame with a compile-time channel count, values in [0, 1].
template <int CH>
struct Frame {
    int h = 0;
    int w = 0;
    std::vector<double> data;

    Frame() = default;
    Frame(int h_, int w_) : h(h_), w(w_), data(static_cast<size_t>(h_) * w_ * CH, 0.0) {}

    double& at(int y, int x, int c) { return data[(static_cast<size_t>(y) * w + x) * CH + c]; }
    double at(int y, int x, int c) const { return data[(static_cast<size_t>(y) * w + x) * CH + c]; }
};

// Frame sequence. CH = 3 for opaque RGB, 4 for RGBA layers, 1 for masks.
template <int CH>
struct FrameSeq {
    int frames = 0;
    int h = 0;
    int w = 0;
    std::vector<double> data;

    FrameSeq() = default;
    FrameSeq(int f, int h_, int w_)
        : frames(f), h(h_), w(w_), data(static_cast<size_t>(f) * h_ * w_ * CH, 0.0) {}

    static constexpr int channels() { return CH; }

    size_t index(int f, int y, int x, int c) const {
        return ((static_cast<size_t>(f) * h + y) * w + x) * CH + c;
    }
    double& at(int f, int y, int x, int c) { return data[index(f, y, x, c)]; }
    double at(int f, int y, int x, int c) const { return data[index(f, y, x, c)]; }

    Frame<CH> frame(int f) const {
        Frame<CH> out(h, w);
        size_t stride = static_cast<size_t>(h) * w * CH;
        std::copy(data.begin() + f * stride, data.begin() + (f + 1) * stride, out.data.begin());
        return out;
    }
    void set_frame(int f, const Frame<CH>& fr) {
        size_t stride = static_cast<size_t>(h) * w * CH;
        std::copy(fr.data.begin(), fr.data.end(), data.begin() + f * stride);
    }

    bool same_shape(const FrameSeq& o) const {
        return frames == o.frames && h == o.h && w == o.w;
    }
};

using RgbVideo = FrameSeq<3>;
using RgbaVideo = FrameSeq<4>;
using MaskVideo = FrameSeq<1>;  // values are exactly 0.0 or 1.0

}  // namespace layergen

#endif
