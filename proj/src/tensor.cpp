// SPDX-License-Identifier: Apache-2.0
#include "layergen/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace layergen {

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dimensions do not match");
    }
    Mat out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Mat transpose(const Mat& m) {
    Mat out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

Mat random_gaussian_mat(int rows, int cols, RandomStream& rng) {
    Mat out(rows, cols);
    for (double& v : out.data) {
        v = rng.gaussian();
    }
    return out;
}

Mat orthonormalize_rows(Mat m, RandomStream& rng) {
    for (int i = 0; i < m.rows; ++i) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (int j = 0; j < i; ++j) {
                double dot = 0.0;
                for (int c = 0; c < m.cols; ++c) dot += m(i, c) * m(j, c);
                for (int c = 0; c < m.cols; ++c) m(i, c) -= dot * m(j, c);
            }
            double norm = 0.0;
            for (int c = 0; c < m.cols; ++c) norm += m(i, c) * m(i, c);
            norm = std::sqrt(norm);
            if (norm > 1e-8) {
                for (int c = 0; c < m.cols; ++c) m(i, c) /= norm;
                break;
            }
            for (int c = 0; c < m.cols; ++c) m(i, c) = rng.gaussian();
        }
    }
    return m;
}

}  // namespace layergen
