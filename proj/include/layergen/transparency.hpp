// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_TRANSPARENCY_HPP
#define LAYERGEN_TRANSPARENCY_HPP

#include <cstdint>

#include "layergen/tensor.hpp"
#include "layergen/video.hpp"

namespace layergen {

// Deterministic stand-in for the transparency decode path: a seeded linear
// offset module that shifts latents into the "transparent" distribution, a
// base decoder D* (latent -> RGB) and a transparent decoder D
// ((RGB, latent) -> RGBA). All maps are per-pixel affine with clamping.
class TransparencyCodec {
public:
    struct Options {
        double offset_scale = 0.1;  // 0 disables the latent adjustment
    };

    TransparencyCodec(uint64_t seed, int latent_ch, int upsample, Options options = {});

    // x_a = x + offset(x); the offset is a fixed seeded linear map of x.
    PlaneVolume adjust_latent(const PlaneVolume& x) const;

    // Base decoder D*: per-latent-cell affine map to RGB, replicated
    // `upsample` times per axis, clamped to [0, 1].
    RgbVideo decode_rgb(const PlaneVolume& x) const;

    // Transparent decoder: D*(x_a) gives the RGB estimate, then
    // (RGB, latent) -> RGBA per pixel, clamped to [0, 1].
    RgbaVideo decode_rgba(const PlaneVolume& x_adjusted) const;

    int upsample() const { return upsample_; }
    int latent_ch() const { return latent_ch_; }

private:
    int latent_ch_;
    int upsample_;
    Options options_;
    Mat offset_weight_;   // ch x ch
    std::vector<double> offset_bias_;
    Mat base_weight_;     // ch x 3
    std::vector<double> base_bias_;
    Mat transparent_weight_;  // (3 + ch) x 4
    std::vector<double> transparent_bias_;
};

struct MaskExtraction {
    MaskVideo masks;     // 1 where alpha >= mask_thresh after cleaning
    RgbaVideo cleaned;   // alpha below low_thresh reset to exactly 0
};

inline constexpr double kDefaultLowAlphaThresh = 16.0 / 255.0;
inline constexpr double kDefaultMaskThresh = 0.5;

// Resets near-transparent alpha residue to exactly 0 and thresholds the rest
// into a binary foreground mask. Idempotent.
MaskExtraction extract_foreground_mask(const RgbaVideo& video,
                                       double low_thresh = kDefaultLowAlphaThresh,
                                       double mask_thresh = kDefaultMaskThresh);

}  // namespace layergen

#endif
