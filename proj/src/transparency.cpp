// SPDX-License-Identifier: Apache-2.0
#include "layergen/transparency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace layergen {

TransparencyCodec::TransparencyCodec(uint64_t seed, int latent_ch, int upsample, Options options)
    : latent_ch_(latent_ch), upsample_(upsample), options_(options) {
    if (latent_ch < 1) throw std::invalid_argument("TransparencyCodec: latent_ch must be >= 1");
    if (upsample < 1) throw std::invalid_argument("TransparencyCodec: upsample must be >= 1");

    RandomStream offset_rng(substream_seed(seed, "codec/offset"));
    offset_weight_ = random_gaussian_mat(latent_ch, latent_ch, offset_rng);
    for (double& v : offset_weight_.data) v *= options_.offset_scale / std::sqrt(latent_ch);
    offset_bias_.resize(latent_ch);
    for (double& v : offset_bias_) v = options_.offset_scale * offset_rng.gaussian();

    RandomStream base_rng(substream_seed(seed, "codec/base"));
    base_weight_ = random_gaussian_mat(latent_ch, 3, base_rng);
    for (double& v : base_weight_.data) v *= 0.5 / std::sqrt(latent_ch);
    base_bias_.resize(3);
    for (double& v : base_bias_) v = 0.5 + 0.1 * base_rng.gaussian();

    RandomStream trans_rng(substream_seed(seed, "codec/transparent"));
    transparent_weight_ = random_gaussian_mat(3 + latent_ch, 4, trans_rng);
    for (double& v : transparent_weight_.data) v *= 0.5 / std::sqrt(3.0 + latent_ch);
    transparent_bias_.resize(4);
    for (double& v : transparent_bias_) v = 0.5 + 0.1 * trans_rng.gaussian();
}

PlaneVolume TransparencyCodec::adjust_latent(const PlaneVolume& x) const {
    if (x.ch != latent_ch_) throw std::invalid_argument("adjust_latent: channel mismatch");
    PlaneVolume out = x;
    if (options_.offset_scale == 0.0) return out;
    for (int f = 0; f < x.frames; ++f) {
        for (int y = 0; y < x.h; ++y) {
            for (int xx = 0; xx < x.w; ++xx) {
                const double* src = &x.data[x.index(f, y, xx, 0)];
                double* dst = &out.data[out.index(f, y, xx, 0)];
                for (int c = 0; c < latent_ch_; ++c) {
                    double offset = offset_bias_[c];
                    for (int c2 = 0; c2 < latent_ch_; ++c2) {
                        offset += offset_weight_(c2, c) * src[c2];
                    }
                    dst[c] = src[c] + offset;
                }
            }
        }
    }
    return out;
}

RgbVideo TransparencyCodec::decode_rgb(const PlaneVolume& x) const {
    if (x.ch != latent_ch_) throw std::invalid_argument("decode_rgb: channel mismatch");
    RgbVideo out(x.frames, x.h * upsample_, x.w * upsample_);
    for (int f = 0; f < x.frames; ++f) {
        for (int y = 0; y < x.h; ++y) {
            for (int xx = 0; xx < x.w; ++xx) {
                const double* src = &x.data[x.index(f, y, xx, 0)];
                double rgb[3];
                for (int c = 0; c < 3; ++c) {
                    double v = base_bias_[c];
                    for (int c2 = 0; c2 < latent_ch_; ++c2) v += base_weight_(c2, c) * src[c2];
                    rgb[c] = std::clamp(v, 0.0, 1.0);
                }
                for (int dy = 0; dy < upsample_; ++dy) {
                    for (int dx = 0; dx < upsample_; ++dx) {
                        for (int c = 0; c < 3; ++c) {
                            out.at(f, y * upsample_ + dy, xx * upsample_ + dx, c) = rgb[c];
                        }
                    }
                }
            }
        }
    }
    return out;
}

RgbaVideo TransparencyCodec::decode_rgba(const PlaneVolume& x_adjusted) const {
    RgbVideo base = decode_rgb(x_adjusted);
    const PlaneVolume& x = x_adjusted;
    RgbaVideo out(base.frames, base.h, base.w);
    for (int f = 0; f < base.frames; ++f) {
        for (int y = 0; y < base.h; ++y) {
            for (int xx = 0; xx < base.w; ++xx) {
                const double* lat = &x.data[x.index(f, y / upsample_, xx / upsample_, 0)];
                double in[3];
                for (int c = 0; c < 3; ++c) in[c] = base.at(f, y, xx, c);
                for (int c = 0; c < 4; ++c) {
                    double v = transparent_bias_[c];
                    for (int c2 = 0; c2 < 3; ++c2) v += transparent_weight_(c2, c) * in[c2];
                    for (int c2 = 0; c2 < latent_ch_; ++c2) {
                        v += transparent_weight_(3 + c2, c) * lat[c2];
                    }
                    out.at(f, y, xx, c) = std::clamp(v, 0.0, 1.0);
                }
            }
        }
    }
    return out;
}

MaskExtraction extract_foreground_mask(const RgbaVideo& video, double low_thresh,
                                       double mask_thresh) {
    if (!(0.0 <= low_thresh && low_thresh <= mask_thresh && mask_thresh <= 1.0)) {
        throw std::invalid_argument(
            "extract_foreground_mask: need 0 <= low_thresh <= mask_thresh <= 1");
    }
    MaskExtraction out;
    out.cleaned = video;
    out.masks = MaskVideo(video.frames, video.h, video.w);
    for (int f = 0; f < video.frames; ++f) {
        for (int y = 0; y < video.h; ++y) {
            for (int x = 0; x < video.w; ++x) {
                double alpha = video.at(f, y, x, 3);
                if (alpha < low_thresh) {
                    alpha = 0.0;
                    out.cleaned.at(f, y, x, 3) = 0.0;
                }
                out.masks.at(f, y, x, 0) = alpha >= mask_thresh ? 1.0 : 0.0;
            }
        }
    }
    return out;
}

}  // namespace layergen
