// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_DENOISER_HPP
#define LAYERGEN_DENOISER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "layergen/attention.hpp"
#include "layergen/scene.hpp"
#include "layergen/tensor.hpp"
#include "layergen/video.hpp"

namespace layergen {

// Dual-plane latent state [f, 2, h, w, ch]: plane 0 is the foreground being
// generated, plane 1 carries the background conditioning.
struct LatentVolume {
    static constexpr int kFgPlane = 0;
    static constexpr int kBgPlane = 1;

    int frames = 0;
    int h = 0;
    int w = 0;
    int ch = 0;
    std::vector<double> data;

    LatentVolume() = default;
    LatentVolume(int f, int h_, int w_, int c)
        : frames(f), h(h_), w(w_), ch(c),
          data(static_cast<size_t>(f) * 2 * h_ * w_ * c, 0.0) {}

    size_t index(int f, int plane, int y, int x, int c) const {
        return (((static_cast<size_t>(f) * 2 + plane) * h + y) * w + x) * ch + c;
    }
    double& at(int f, int plane, int y, int x, int c) { return data[index(f, plane, y, x, c)]; }
    double at(int f, int plane, int y, int x, int c) const { return data[index(f, plane, y, x, c)]; }

    PlaneVolume plane(int p) const;
    void set_plane(int p, const PlaneVolume& v);
};

// Per-step noise scale, consumed in step order t = T .. 1.
struct SamplerSchedule {
    int total_steps = 0;
    std::vector<double> noise_scale;  // noise_scale[t - 1] belongs to step t

    static SamplerSchedule linear(int total_steps);
    double scale_for_step(int t) const { return noise_scale[t - 1]; }
};

struct TraceRecord {
    int step = 0;
    std::string sub_block;    // condition_bg, ST, TT_AS, TT_AI, sampler_update
    bool guidance_active = false;
    std::string condition;    // condition_bg only: "background", "blend" or "none"
};

struct StepTrace {
    std::vector<TraceRecord> records;
};

struct DenoiserDims {
    int frames = 16;
    int latent_h = 32;
    int latent_w = 32;
    int latent_ch = 4;
    int image_h = 256;
    int image_w = 256;
};

// Two seeded 3x3 stride convolutions taking the conditioning RGB video down
// to the latent grid, added onto the background plane each step.
class ControlEncoder {
public:
    ControlEncoder(uint64_t seed, const DenoiserDims& dims);

    // All-zero weights and biases; encodes everything to zero.
    static ControlEncoder zeroed(const DenoiserDims& dims);

    PlaneVolume encode(const RgbVideo& video) const;

    int mid_channels() const { return mid_ch_; }
    uint64_t digest(uint64_t h) const;

private:
    DenoiserDims dims_;
    int stride1_y_ = 1, stride1_x_ = 1;
    int stride2_y_ = 1, stride2_x_ = 1;
    int mid_ch_ = 8;
    std::vector<double> k1_, b1_;  // [mid][3][3][3], [mid]
    std::vector<double> k2_, b2_;  // [out][mid][3][3], [out]
};

PlaneVolume condition_background(const PlaneVolume& x_bg, const RgbVideo& b,
                                 const ControlEncoder& encoder);

// Number of leading inference steps a window fraction covers, counting from
// the start of the run (t = T downward).
int guidance_window_steps(double window_fraction, int total_steps);

// Deterministic denoiser: fixed seeded weights wiring guided cross-attention,
// (oriented) attention-sharing and attention-isolation around a residual
// update, plus a per-step sampler contraction. Identical seed and inputs give
// bit-identical outputs.
class ToyDenoiser {
public:
    static constexpr int kTextDim = 8;

    ToyDenoiser(uint64_t seed, const DenoiserDims& dims);

    const DenoiserDims& dims() const { return dims_; }
    const ControlEncoder& encoder() const { return encoder_; }
    uint64_t parameter_digest() const;

    // Toy text encoder: one seeded embedding per word, wrapped in start/end
    // context tokens. For foreground prompts the word tokens form c_F.
    PromptEmbedding embed_prompt(const std::string& text, bool foreground) const;

    // One denoising step over the dual-plane volume. `condition_encoding` is
    // the pre-computed control-conv embedding of the conditioning video (null
    // for an unconditioned step); `track` enables box guidance (null for
    // none). Sub-block order is fixed: condition_bg, ST, TT_AS, TT_AI,
    // sampler_update.
    LatentVolume denoise_step(const LatentVolume& x, const PromptEmbedding& prompt,
                              const PlaneVolume* condition_encoding, const BBoxTrack* track,
                              int t, int total_steps, const GuidanceConfig& cfg,
                              StepTrace* trace = nullptr,
                              const std::string& condition_label = "none") const;

    // Convenience overload that encodes the conditioning video itself.
    LatentVolume denoise_step(const LatentVolume& x, const PromptEmbedding& prompt,
                              const RgbVideo& condition, const BBoxTrack* track, int t,
                              int total_steps, const GuidanceConfig& cfg,
                              StepTrace* trace = nullptr,
                              const std::string& condition_label = "background") const;

    // Single-plane step used for background generation: plain cross-attention,
    // singleton sharing, per-plane temporal attention, no conditioning.
    PlaneVolume denoise_step_single(const PlaneVolume& x, const PromptEmbedding& prompt, int t,
                                    int total_steps, StepTrace* trace = nullptr) const;

private:
    void apply_spatial_transformer(PlaneVolume& plane, const PromptEmbedding& prompt,
                                   const BBoxTrack* track, double lambda,
                                   double gamma_key) const;
    void residual_update(PlaneVolume& plane, const PlaneVolume& block_out) const;
    void sampler_update(PlaneVolume& plane, int t, int total_steps) const;

    DenoiserDims dims_;
    uint64_t seed_;
    ControlEncoder encoder_;
    Mat st_wq_;  // latent_ch x latent_ch
    Mat st_wk_;  // kTextDim x latent_ch
    Mat st_wv_;  // kTextDim x latent_ch
    Mat st_wo_;  // latent_ch x latent_ch
    AttentionProjections sharing_proj_;
    AttentionProjections temporal_proj_;
};

LatentVolume seeded_noise_volume(const DenoiserDims& dims, uint64_t seed);
PlaneVolume seeded_noise_plane(const DenoiserDims& dims, uint64_t seed);

}  // namespace layergen

#endif
