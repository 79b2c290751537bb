// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "alesal/dsp/features.hpp"
#include "alesal/nn/params.hpp"

namespace alesal::model {

// Builds the class logits [1 x C] for one window inside a fresh graph.
// Implementations bind their parameters through the Binder and handle any
// internal state (e.g. batch-norm running stats) themselves.
using LogitsBuilder = std::function<nn::Var<float>(nn::Graph<float>&, nn::Binder<float>&,
                                                   const dsp::WindowFeatures&, bool training)>;

struct FitConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    int batch_size = 32;
    int max_epochs = 100;
    int patience = 10;  // early-stopping epochs without val-loss improvement
    std::uint64_t seed = 0;
    bool restore_best = true;
    std::function<void(const struct EpochStats&)> on_epoch;  // optional progress hook
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0, train_acc = 0;
    double val_loss = 0, val_acc = 0;
    std::uint64_t param_hash = 0;  // fingerprint of all parameters after the epoch
};

struct FitHistory {
    std::vector<EpochStats> epochs;
    int best_epoch = -1;
    double best_val_loss = 0;
};

// Mini-batch Adam with deterministic shuffling and early stopping on the
// validation loss. Per-sample gradients accumulate in a fixed order; a NaN
// loss aborts with the epoch index. An empty validation set disables early
// stopping (the run uses all max_epochs).
FitHistory fit(nn::ParamStore<float>& params, const LogitsBuilder& builder,
               const std::vector<dsp::WindowFeatures>& train,
               const std::vector<dsp::WindowFeatures>& val, const FitConfig& config);

// Mean cross-entropy loss and accuracy of `builder` over a set, eval mode.
std::pair<double, double> evaluate_loss(const LogitsBuilder& builder,
                                        const std::vector<dsp::WindowFeatures>& samples);

}  // namespace alesal::model
