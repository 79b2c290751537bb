// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "alesal/nn/rng.hpp"
#include "alesal/nn/tensor.hpp"

namespace testutil {

template <typename T>
alesal::nn::Tensor<T> random_tensor(alesal::nn::Rng& rng, std::vector<int> shape, double lo = -1.0,
                                    double hi = 1.0) {
    alesal::nn::Tensor<T> t(std::move(shape));
    for (T& v : t.data) v = static_cast<T>(rng.uniform(lo, hi));
    return t;
}

// Naive DFT magnitude of one real frame; the independent oracle used
// against the spectrogram implementation.
inline std::vector<double> naive_dft_mag(const std::vector<double>& x, int bins) {
    const double n = static_cast<double>(x.size());
    std::vector<double> mag(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double ang = -2.0 * 3.14159265358979323846 * k * static_cast<double>(i) / n;
            acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        mag[static_cast<std::size_t>(k)] = std::abs(acc);
    }
    return mag;
}

// Total spectral power of a (mean-removed) segment inside [f_lo, f_hi] Hz,
// computed with a direct DFT sum. Used as the band-power oracle.
inline double band_power(const std::vector<double>& x, double rate, double f_lo, double f_hi) {
    const int n = static_cast<int>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double power = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
        const double f = k * rate / n;
        if (f < f_lo || f > f_hi) continue;
        std::complex<double> acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ang = -2.0 * 3.14159265358979323846 * k * i / static_cast<double>(n);
            acc += (x[i] - mean) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        power += std::norm(acc);
    }
    return power;
}

}  // namespace testutil
