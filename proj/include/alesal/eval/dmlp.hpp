// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "alesal/model/fit.hpp"

namespace alesal::eval {

// Comparison baseline: a plain MLP over the concatenated per-pair amplitude
// series (no spectrograms, no attention), trained with the same loss and
// optimizer as the main model.
struct DmlpConfig {
    int pairs = 4;
    int series_len = 200;
    std::array<int, 3> hidden{256, 128, 64};
    int classes = 3;

    int input_dim() const { return pairs * series_len; }
};

nn::ParamStore<float> init_dmlp(const DmlpConfig& config, std::uint64_t seed);

// LogitsBuilder-compatible forward.
nn::Var<float> dmlp_logits(nn::Graph<float>& g, nn::Binder<float>& bind,
                           nn::ParamStore<float>& params, const DmlpConfig& config,
                           const dsp::WindowFeatures& input);

model::LogitsBuilder make_dmlp_builder(nn::ParamStore<float>& params, const DmlpConfig& config);

}  // namespace alesal::eval
