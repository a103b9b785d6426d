// SPDX-License-Identifier: Apache-2.0
#include "layergen/attention.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace layergen {

namespace {

// Large enough that exp(x - rowmax) underflows to exactly 0 in double.
constexpr double kMaskedLogit = -1e30;

// Row-wise softmax in place. Masked entries must already hold kMaskedLogit;
// they come out as exact zeros.
void softmax_rows(Mat& logits) {
    for (int i = 0; i < logits.rows; ++i) {
        double row_max = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < logits.cols; ++j) row_max = std::max(row_max, logits(i, j));
        double sum = 0.0;
        for (int j = 0; j < logits.cols; ++j) {
            double e = std::exp(logits(i, j) - row_max);
            logits(i, j) = e;
            sum += e;
        }
        for (int j = 0; j < logits.cols; ++j) logits(i, j) /= sum;
    }
}

Mat scaled_logits(const Mat& q, const Mat& k) {
    if (q.cols != k.cols) throw std::invalid_argument("attention: Q/K dim mismatch");
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(q.cols));
    Mat logits(q.rows, k.rows);
    for (int i = 0; i < q.rows; ++i) {
        for (int j = 0; j < k.rows; ++j) {
            double dot = 0.0;
            for (int c = 0; c < q.cols; ++c) dot += q(i, c) * k(j, c);
            logits(i, j) = dot * inv_sqrt_d;
        }
    }
    return logits;
}

CrossAttentionResult attention_from_logits(Mat logits, const Mat& v) {
    softmax_rows(logits);
    CrossAttentionResult out;
    out.output = matmul(logits, v);
    out.weights = std::move(logits);
    return out;
}

Mat masked_softmax_weights(const Mat& q, const Mat& k, const PhiPartition& phi) {
    Mat logits = scaled_logits(q, k);
    for (int i = 0; i < logits.rows; ++i) {
        for (int j = 0; j < logits.cols; ++j) {
            if (phi.label(i, j) == 1) logits(i, j) = kMaskedLogit;
        }
    }
    softmax_rows(logits);
    return logits;
}

// Shared implementation of the 2-token sharing kernel. track == nullptr means
// no oriented weighting anywhere (every cell is scaled by exactly 1.0, which
// is a bitwise no-op, so the plain and degenerate oriented paths agree).
AttentionPlanes sharing_kernel(const AttentionPlanes& planes, const BBoxTrack* track,
                               double mu1, double mu2, const AttentionProjections& proj) {
    const PlaneVolume& fg = planes.fg;
    const PlaneVolume& bg = planes.bg;
    if (!fg.same_shape(bg)) throw std::invalid_argument("attention_sharing: plane shape mismatch");
    if (track && track->frames() != fg.frames) {
        throw std::invalid_argument("attention_sharing: track length != frame count");
    }
    int ch = fg.ch;
    int d = proj.wq.cols;
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

    AttentionPlanes out;
    out.fg = PlaneVolume(fg.frames, fg.h, fg.w, ch);
    out.bg = PlaneVolume(fg.frames, fg.h, fg.w, ch);

    std::vector<double> qrow(2 * d), krow(2 * d), vrow(2 * ch);
    for (int f = 0; f < fg.frames; ++f) {
        CellRange range{0, 0, 0, 0};
        if (track) range = scale_to_latent_grid(track->boxes[f], fg.h, fg.w);
        for (int y = 0; y < fg.h; ++y) {
            for (int x = 0; x < fg.w; ++x) {
                const double* tok[2] = {&fg.data[fg.index(f, y, x, 0)],
                                        &bg.data[bg.index(f, y, x, 0)]};
                for (int t = 0; t < 2; ++t) {
                    for (int j = 0; j < d; ++j) {
                        double sq = 0.0, sk = 0.0;
                        for (int c = 0; c < ch; ++c) {
                            sq += tok[t][c] * proj.wq(c, j);
                            sk += tok[t][c] * proj.wk(c, j);
                        }
                        qrow[t * d + j] = sq;
                        krow[t * d + j] = sk;
                    }
                    for (int j = 0; j < ch; ++j) {
                        double sv = 0.0;
                        for (int c = 0; c < ch; ++c) sv += tok[t][c] * proj.wv(c, j);
                        vrow[t * ch + j] = sv;
                    }
                }
                bool in_box = track && range.contains(y, x);
                double w[2][2];
                for (int i = 0; i < 2; ++i) {
                    double l0 = 0.0, l1 = 0.0;
                    for (int j = 0; j < d; ++j) {
                        l0 += qrow[i * d + j] * krow[j];
                        l1 += qrow[i * d + j] * krow[d + j];
                    }
                    l0 *= inv_sqrt_d;
                    l1 *= inv_sqrt_d;
                    double m = std::max(l0, l1);
                    double e0 = std::exp(l0 - m);
                    double e1 = std::exp(l1 - m);
                    double sum = e0 + e1;
                    w[i][0] = e0 / sum;
                    w[i][1] = e1 / sum;
                    double scale_same = in_box ? mu1 : 1.0;
                    double scale_cross = in_box ? mu2 : 1.0;
                    w[i][i] *= scale_same;
                    w[i][1 - i] *= scale_cross;
                }
                PlaneVolume* out_planes[2] = {&out.fg, &out.bg};
                for (int i = 0; i < 2; ++i) {
                    double* dst = &out_planes[i]->data[out_planes[i]->index(f, y, x, 0)];
                    for (int c = 0; c < ch; ++c) {
                        dst[c] = w[i][0] * vrow[c] + w[i][1] * vrow[ch + c];
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

AttentionProjections seeded_projections(int ch, uint64_t seed) {
    RandomStream rng(seed);
    AttentionProjections proj;
    proj.wq = orthonormalize_rows(random_gaussian_mat(ch, ch, rng), rng);
    proj.wk = orthonormalize_rows(random_gaussian_mat(ch, ch, rng), rng);
    proj.wv = orthonormalize_rows(random_gaussian_mat(ch, ch, rng), rng);
    return proj;
}

size_t PhiPartition::count(int n) const {
    size_t total = 0;
    for (int i = 0; i < n_pixels(); ++i) {
        for (int j = 0; j < n_tokens; ++j) {
            if (label(i, j) == n) ++total;
        }
    }
    return total;
}

PhiPartition partition_phi(const CellRange& range, const std::set<int>& fg_tokens, int grid_h,
                           int grid_w, int n_tokens) {
    if (range.row0 < 0 || range.col0 < 0 || range.row1 > grid_h || range.col1 > grid_w) {
        throw std::invalid_argument("partition_phi: cell range outside the grid");
    }
    PhiPartition phi;
    phi.grid_h = grid_h;
    phi.grid_w = grid_w;
    phi.n_tokens = n_tokens;
    phi.pixel_in_box.assign(static_cast<size_t>(grid_h) * grid_w, 0);
    for (int r = range.row0; r < range.row1; ++r) {
        for (int c = range.col0; c < range.col1; ++c) {
            phi.pixel_in_box[static_cast<size_t>(r) * grid_w + c] = 1;
        }
    }
    phi.token_is_fg.assign(n_tokens, 0);
    for (int t : fg_tokens) {
        if (t < 0 || t >= n_tokens) {
            throw std::invalid_argument("partition_phi: foreground token index out of range");
        }
        phi.token_is_fg[t] = 1;
    }
    return phi;
}

Mat gaussian_weight_map(const CellRange& range) {
    int height = range.height();
    int width = range.width();
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("gaussian_weight_map: empty cell range");
    }
    // Cell positions span [-1, 1] per axis; sigma = extent/4 means the
    // edge-center cells sit at 2 sigma, i.e. weight exp(-2).
    auto axis_weights = [](int n) {
        std::vector<double> ws(n);
        for (int i = 0; i < n; ++i) {
            double p = n > 1 ? 2.0 * i / (n - 1) - 1.0 : 0.0;
            ws[i] = std::exp(-2.0 * p * p);
        }
        return ws;
    };
    std::vector<double> wy = axis_weights(height);
    std::vector<double> wx = axis_weights(width);
    Mat map(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            map(r, c) = wy[r] * wx[c];
        }
    }
    return map;
}

CrossAttentionResult cross_attention(const Mat& q, const Mat& k, const Mat& v) {
    if (k.rows == 0) throw std::invalid_argument("cross_attention: no tokens");
    if (k.rows != v.rows) throw std::invalid_argument("cross_attention: K/V row mismatch");
    return attention_from_logits(scaled_logits(q, k), v);
}

CrossAttentionResult masked_cross_attention(const Mat& q, const Mat& k, const Mat& v,
                                            const CellRange& range, int grid_h, int grid_w,
                                            const std::set<int>& fg_tokens) {
    return guided_cross_attention(q, k, v, range, grid_h, grid_w, fg_tokens, 0.0, 1.0);
}

CrossAttentionResult guided_cross_attention(const Mat& q, const Mat& k, const Mat& v,
                                            const CellRange& range, int grid_h, int grid_w,
                                            const std::set<int>& fg_tokens, double lambda,
                                            double gamma_frame) {
    if (k.rows == 0) throw std::invalid_argument("guided_cross_attention: no tokens");
    if (k.rows != v.rows) throw std::invalid_argument("guided_cross_attention: K/V row mismatch");
    if (q.rows != grid_h * grid_w) {
        throw std::invalid_argument("guided_cross_attention: Q rows != grid size");
    }
    if (lambda < 0.0) throw std::invalid_argument("guided_cross_attention: lambda must be >= 0");

    PhiPartition phi = partition_phi(range, fg_tokens, grid_h, grid_w, k.rows);
    Mat weights = masked_softmax_weights(q, k, phi);
    if (lambda != 0.0) {
        Mat gauss = gaussian_weight_map(range);
        for (int r = range.row0; r < range.row1; ++r) {
            for (int c = range.col0; c < range.col1; ++c) {
                int pixel = r * grid_w + c;
                double boost = lambda * gauss(r - range.row0, c - range.col0) * gamma_frame;
                for (int t : fg_tokens) weights(pixel, t) += boost;
            }
        }
    }
    CrossAttentionResult out;
    out.output = matmul(weights, v);
    out.weights = std::move(weights);
    return out;
}

AttentionPlanes attention_sharing(const AttentionPlanes& planes,
                                  const AttentionProjections& proj) {
    return sharing_kernel(planes, nullptr, 1.0, 1.0, proj);
}

AttentionPlanes oriented_attention_sharing(const AttentionPlanes& planes, const BBoxTrack& track,
                                           double mu1, double mu2,
                                           const AttentionProjections& proj) {
    return sharing_kernel(planes, &track, mu1, mu2, proj);
}

Mat sharing_weights(const std::vector<double>& fg_token, const std::vector<double>& bg_token,
                    bool in_box, double mu1, double mu2, const AttentionProjections& proj) {
    int ch = static_cast<int>(fg_token.size());
    AttentionPlanes planes;
    planes.fg = PlaneVolume(1, 1, 1, ch);
    planes.bg = PlaneVolume(1, 1, 1, ch);
    for (int c = 0; c < ch; ++c) {
        planes.fg.at(0, 0, 0, c) = fg_token[c];
        planes.bg.at(0, 0, 0, c) = bg_token[c];
    }
    int d = proj.wq.cols;
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    Mat tok(2, ch);
    for (int c = 0; c < ch; ++c) {
        tok(0, c) = fg_token[c];
        tok(1, c) = bg_token[c];
    }
    Mat q = matmul(tok, proj.wq);
    Mat kk = matmul(tok, proj.wk);
    Mat w(2, 2);
    for (int i = 0; i < 2; ++i) {
        double l0 = 0.0, l1 = 0.0;
        for (int j = 0; j < d; ++j) {
            l0 += q(i, j) * kk(0, j);
            l1 += q(i, j) * kk(1, j);
        }
        l0 *= inv_sqrt_d;
        l1 *= inv_sqrt_d;
        double m = std::max(l0, l1);
        double e0 = std::exp(l0 - m);
        double e1 = std::exp(l1 - m);
        double sum = e0 + e1;
        w(i, 0) = e0 / sum;
        w(i, 1) = e1 / sum;
        w(i, i) *= in_box ? mu1 : 1.0;
        w(i, 1 - i) *= in_box ? mu2 : 1.0;
    }
    return w;
}

PlaneVolume temporal_self_attention(const PlaneVolume& src, const AttentionProjections& proj) {
    int ch = src.ch;
    int d = proj.wq.cols;
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    int frames = src.frames;

    PlaneVolume dst(frames, src.h, src.w, ch);
    std::vector<double> q(static_cast<size_t>(frames) * d);
    std::vector<double> k(static_cast<size_t>(frames) * d);
    std::vector<double> vv(static_cast<size_t>(frames) * ch);
    std::vector<double> logits(static_cast<size_t>(frames) * frames);

    for (int y = 0; y < src.h; ++y) {
        for (int x = 0; x < src.w; ++x) {
            for (int f = 0; f < frames; ++f) {
                const double* tok = &src.data[src.index(f, y, x, 0)];
                for (int j = 0; j < d; ++j) {
                    double sq = 0.0, sk = 0.0;
                    for (int c = 0; c < ch; ++c) {
                        sq += tok[c] * proj.wq(c, j);
                        sk += tok[c] * proj.wk(c, j);
                    }
                    q[static_cast<size_t>(f) * d + j] = sq;
                    k[static_cast<size_t>(f) * d + j] = sk;
                }
                for (int j = 0; j < ch; ++j) {
                    double sv = 0.0;
                    for (int c = 0; c < ch; ++c) sv += tok[c] * proj.wv(c, j);
                    vv[static_cast<size_t>(f) * ch + j] = sv;
                }
            }
            for (int a = 0; a < frames; ++a) {
                double row_max = -std::numeric_limits<double>::infinity();
                for (int b = 0; b < frames; ++b) {
                    double dot = 0.0;
                    for (int j = 0; j < d; ++j) {
                        dot += q[static_cast<size_t>(a) * d + j] * k[static_cast<size_t>(b) * d + j];
                    }
                    double l = dot * inv_sqrt_d;
                    logits[static_cast<size_t>(a) * frames + b] = l;
                    row_max = std::max(row_max, l);
                }
                double sum = 0.0;
                for (int b = 0; b < frames; ++b) {
                    double e = std::exp(logits[static_cast<size_t>(a) * frames + b] - row_max);
                    logits[static_cast<size_t>(a) * frames + b] = e;
                    sum += e;
                }
                double* dst_tok = &dst.data[dst.index(a, y, x, 0)];
                for (int c = 0; c < ch; ++c) dst_tok[c] = 0.0;
                for (int b = 0; b < frames; ++b) {
                    double wgt = logits[static_cast<size_t>(a) * frames + b] / sum;
                    const double* vrow = &vv[static_cast<size_t>(b) * ch];
                    for (int c = 0; c < ch; ++c) dst_tok[c] += wgt * vrow[c];
                }
            }
        }
    }
    return dst;
}

AttentionPlanes isolated_temporal_attention(const AttentionPlanes& planes,
                                            const AttentionProjections& proj) {
    if (!planes.fg.same_shape(planes.bg)) {
        throw std::invalid_argument("isolated_temporal_attention: plane shape mismatch");
    }
    AttentionPlanes out;
    out.fg = temporal_self_attention(planes.fg, proj);
    out.bg = temporal_self_attention(planes.bg, proj);
    return out;
}

}  // namespace layergen
