// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "alesal/common/error.hpp"

namespace alesal::dsp {

struct PcaResult {
    std::vector<double> series;  // projection of the mean-centered data, length = time
    double top_eigenvalue = 0.0;
    double total_variance = 0.0;  // trace of the covariance
    int iterations = 0;

    double explained_ratio() const {
        return total_variance > 0 ? top_eigenvalue / total_variance : 0.0;
    }
};

// First principal component of a [time x S] block: mean-center columns,
// form the S x S sample covariance (1/(time-1)), find the top eigenvector
// by power iteration (tolerance 1e-10, at most 1000 iterations), and
// project. Sign convention: the component is flipped if its correlation
// with the subcarrier-mean series is negative. Throws "degenerate window"
// when the total variance is zero.
PcaResult pca_first_component(const std::vector<double>& data, int time, int subcarriers);

}  // namespace alesal::dsp
