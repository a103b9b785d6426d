// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_ATTENTION_HPP
#define LAYERGEN_ATTENTION_HPP

#include <set>
#include <vector>

#include "layergen/scene.hpp"
#include "layergen/tensor.hpp"

namespace layergen {

// Prompt embedding matrix [n_tokens x d_text] plus the token positions that
// belong to the foreground subject.
struct PromptEmbedding {
    Mat tokens;
    std::set<int> fg_token_indices;
};

// Foreground/background latent views processed by the temporal kernels.
struct AttentionPlanes {
    PlaneVolume fg;
    PlaneVolume bg;
};

// Fixed projections for the 2-token sharing and cross-frame kernels. All are
// square over the latent channel count so outputs keep the plane shape.
struct AttentionProjections {
    Mat wq;
    Mat wk;
    Mat wv;
};

AttentionProjections seeded_projections(int ch, uint64_t seed);

// Labeling of (pixel, token) pairs: label = [pixel in box] + [token in c_F],
// so 2 = boosted cells, 1 = masked cells, 0 = untouched cells.
struct PhiPartition {
    int grid_h = 0;
    int grid_w = 0;
    int n_tokens = 0;
    std::vector<uint8_t> pixel_in_box;  // size grid_h * grid_w
    std::vector<uint8_t> token_is_fg;   // size n_tokens

    int n_pixels() const { return grid_h * grid_w; }
    int label(int pixel, int token) const {
        return pixel_in_box[pixel] + token_is_fg[token];
    }
    size_t count(int n) const;
};

PhiPartition partition_phi(const CellRange& range, const std::set<int>& fg_tokens,
                           int grid_h, int grid_w, int n_tokens);

// Separable Gaussian over the in-box cells, peak 1 at the box center and
// exp(-2) at the edge-center cells (sigma = extent / 4 per axis).
Mat gaussian_weight_map(const CellRange& range);

struct CrossAttentionResult {
    Mat weights;  // [n_pixels x n_tokens], post-mask softmax plus additive boost
    Mat output;   // weights * V
};

// Plain softmax attention, no masking. Baseline used when no box guidance
// applies (background generation, steps outside the guidance window).
CrossAttentionResult cross_attention(const Mat& q, const Mat& k, const Mat& v);

// Softmax attention with masked-out cells where exactly one of {pixel in box,
// token in c_F} holds. Equal to guided_cross_attention with lambda = 0.
CrossAttentionResult masked_cross_attention(const Mat& q, const Mat& k, const Mat& v,
                                            const CellRange& range, int grid_h, int grid_w,
                                            const std::set<int>& fg_tokens);

// Masked softmax plus the additive Gaussian boost lambda * M, where M is
// gamma_frame-scaled on in-box/foreground-token cells and zero elsewhere.
// Rows are NOT renormalized after the boost.
CrossAttentionResult guided_cross_attention(const Mat& q, const Mat& k, const Mat& v,
                                            const CellRange& range, int grid_h, int grid_w,
                                            const std::set<int>& fg_tokens, double lambda,
                                            double gamma_frame);

// Per (frame, pixel) attention over the 2-token [FG, BG] pair. The plain
// variant weighs every cell by 1; the oriented variant scales in-box cells by
// mu1 (within-plane) and mu2 (cross-plane) via a Hadamard product on the
// softmax map.
AttentionPlanes attention_sharing(const AttentionPlanes& planes,
                                  const AttentionProjections& proj);
AttentionPlanes oriented_attention_sharing(const AttentionPlanes& planes, const BBoxTrack& track,
                                           double mu1, double mu2,
                                           const AttentionProjections& proj);

// Exposes the 2x2 sharing weights for one pixel; test/diagnostic surface.
Mat sharing_weights(const std::vector<double>& fg_token, const std::vector<double>& bg_token,
                    bool in_box, double mu1, double mu2, const AttentionProjections& proj);

// Self-attention over the frame sequence at each spatial location.
PlaneVolume temporal_self_attention(const PlaneVolume& plane, const AttentionProjections& proj);

// Cross-frame self-attention run separately per plane, so neither plane can
// read the other.
AttentionPlanes isolated_temporal_attention(const AttentionPlanes& planes,
                                            const AttentionProjections& proj);

}  // namespace layergen

#endif
