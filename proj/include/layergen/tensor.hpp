// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_TENSOR_HPP
#define LAYERGEN_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "layergen/rng.hpp"

namespace layergen {

// Dense row-major matrix of doubles. The engine runs everything in double
// so oracle comparisons at 1e-9..1e-12 stay meaningful.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    size_t numel() const { return data.size(); }
};

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m);
Mat random_gaussian_mat(int rows, int cols, RandomStream& rng);

// Gram-Schmidt on rows; rank-deficient rows fall back to scaled random rows.
// Used for the toy model's Q/K/V projections so repeated application keeps
// magnitudes bounded.
Mat orthonormalize_rows(Mat m, RandomStream& rng);

// One latent plane: [frames, h, w, ch], row-major.
struct PlaneVolume {
    int frames = 0;
    int h = 0;
    int w = 0;
    int ch = 0;
    std::vector<double> data;

    PlaneVolume() = default;
    PlaneVolume(int f, int h_, int w_, int c)
        : frames(f), h(h_), w(w_), ch(c),
          data(static_cast<size_t>(f) * h_ * w_ * c, 0.0) {}

    size_t index(int f, int y, int x, int c) const {
        return ((static_cast<size_t>(f) * h + y) * w + x) * ch + c;
    }
    double& at(int f, int y, int x, int c) { return data[index(f, y, x, c)]; }
    double at(int f, int y, int x, int c) const { return data[index(f, y, x, c)]; }

    bool same_shape(const PlaneVolume& o) const {
        return frames == o.frames && h == o.h && w == o.w && ch == o.ch;
    }
};

}  // namespace layergen

#endif
