// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "alesal/common/error.hpp"

namespace alesal::model {

// Kernel size of the channel-attention 1-D convolution: the nearest odd
// integer to log2(N)/gamma + b/gamma, exact ties rounding up, never below 1.
inline int eca_kernel_size(int n_channels, double gamma, double b) {
    if (n_channels < 2) throw Error("eca_kernel_size: need at least 2 channels");
    if (!(gamma > 0)) throw Error("eca_kernel_size: gamma must be positive");
    const double x = std::log2(static_cast<double>(n_channels)) / gamma + b / gamma;
    const double lower = 2.0 * std::floor((x - 1.0) / 2.0) + 1.0;  // largest odd <= x (or x itself)
    const double upper = lower + 2.0;
    const double k = (x - lower < upper - x) ? lower : upper;  // tie goes up
    return std::max(1, static_cast<int>(k));
}

// Network dimensions. The per-pair CNN halves nothing and pools twice by 3,
// so a 200-sample series yields 16 x 22 features per pair and a 64 x 22
// concatenation over 4 pairs.
struct ModelDims {
    int pairs = 4;
    int series_len = 200;
    int frames = 11;
    int bins = 51;
    int me_channels = 16;  // per pair; concatenated channel count = me_channels * pairs
    int me_kernel = 7;
    int pool = 3;
    int gru_hidden = 32;
    int d_k = 32;
    int ta_latent = 16;
    int pa_latent = 32;
    int head_hidden = 64;
    int classes = 3;
    double eca_gamma = 2.0;
    double eca_b = 1.0;

    int me_out_len() const { return series_len / pool / pool; }
    int concat_channels() const { return me_channels * pairs; }
    int eca_k() const { return eca_kernel_size(concat_channels(), eca_gamma, eca_b); }
};

// Which branches and attention mechanisms a model variant runs with.
// amplitude_only drops the GRU branches (time-domain input only);
// spectrum_only drops the CNN branches. with_ta / with_pa gate the two
// attention mechanisms within an enabled branch.
struct ModelConfig {
    ModelDims dims;
    bool with_ta = true;
    bool with_pa = true;
    bool amplitude_only = false;
    bool spectrum_only = false;
    bool shared_gru = false;  // one GRU + attention stack shared across pairs

    bool use_ta_branch() const { return !amplitude_only; }
    bool use_me_branch() const { return !spectrum_only; }

    int head_input_dim() const {
        int dim = 0;
        if (use_ta_branch()) dim += dims.pairs * dims.ta_latent;
        if (use_me_branch()) dim += dims.pa_latent;
        return dim;
    }

    void validate() const {
        if (amplitude_only && spectrum_only)
            throw Error("model: all input branches disabled");
        if (dims.pairs < 1 || dims.classes < 2) throw Error("model: bad dims");
        if (dims.d_k != dims.gru_hidden)
            throw Error("model: residual attention requires d_k == gru_hidden");
        if (use_me_branch()) {
            if (dims.me_kernel % 2 == 0) throw Error("model: ME kernel must be odd");
            if (dims.series_len % (dims.pool * dims.pool) != 0)
                throw Error("model: series length must be divisible by pool^2");
        }
    }

    std::string describe() const {
        if (amplitude_only) return with_pa ? "amplitude-only" : "amplitude-only,no-pa";
        if (spectrum_only) return with_ta ? "spectrum-only" : "spectrum-only,no-ta";
        if (with_ta && with_pa) return "full";
        if (with_ta) return "no-pa";
        if (with_pa) return "no-ta";
        return "no-attention";
    }
};

}  // namespace alesal::model
