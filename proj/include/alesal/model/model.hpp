// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "alesal/dsp/features.hpp"
#include "alesal/model/config.hpp"
#include "alesal/model/fit.hpp"
#include "alesal/nn/attention.hpp"
#include "alesal/nn/gru.hpp"
#include "alesal/nn/ops.hpp"
#include "alesal/nn/params.hpp"

namespace alesal::model {

// Attention values exposed for inspection: one [T x T] matrix per pair for
// the time attention, one [1 x N] weight row for the pair attention.
template <typename T>
struct Diagnostics {
    std::vector<nn::Tensor<T>> ta_attention;
    nn::Tensor<T> pa_weights;
    bool has_pa = false;
};

// Pending running-statistics update of one batch-norm layer, applied by the
// training loop after the sample's backward pass.
template <typename T>
struct BnUpdate {
    std::string prefix;  // e.g. "me.p0.bn1"
    nn::BnStats<T> stats;
};

// Learnable parameters for a config, uniform(-1/sqrt(fan_in), ..) weights,
// zero biases, unit batch-norm scale. Entry order is fixed by construction
// and defines the checkpoint layout.
nn::ParamStore<float> init_params(const ModelConfig& config, std::uint64_t seed);

// Assembles the network graph for one window and returns the class logits
// [1 x classes]. In training mode, batch-norm layers use batch statistics
// and report running-stat updates through bn_updates; in eval mode they
// require initialized running statistics ("bn.count" > 0).
template <typename T>
nn::Var<T> forward_logits(nn::Graph<T>& g, nn::Binder<T>& bind, nn::ParamStore<T>& params,
                          const ModelConfig& config, const dsp::WindowFeatures& input,
                          bool training, Diagnostics<T>* diag = nullptr,
                          std::vector<BnUpdate<T>>* bn_updates = nullptr);

// Applies a collected running-stat update with momentum 0.1 (first update
// copies the batch statistics) and bumps "bn.count".
template <typename T>
void apply_bn_update(nn::ParamStore<T>& params, const BnUpdate<T>& update);

// Eval-mode convenience: probabilities + diagnostics for one window.
struct InferenceResult {
    std::array<float, 3> probs{};
    int predicted = -1;
    Diagnostics<float> diag;
};
InferenceResult infer(nn::ParamStore<float>& params, const ModelConfig& config,
                      const dsp::WindowFeatures& input, bool want_diagnostics = false);

// Checkpoint metadata round trip for the config.
std::map<std::string, std::string> config_to_meta(const ModelConfig& config);
ModelConfig config_from_meta(const std::map<std::string, std::string>& meta);

// LogitsBuilder for the training loop; applies batch-norm running-stat
// updates right after each training forward. params and config must outlive
// the builder.
model::LogitsBuilder make_builder(nn::ParamStore<float>& params, const ModelConfig& config);

// ===========================================================================
// template implementation
// ===========================================================================

namespace detail {

template <typename T>
nn::Tensor<T> series_tensor(const dsp::PairSeries& s) {
    nn::Tensor<T> t({1, static_cast<int>(s.values.size())});
    for (std::size_t i = 0; i < s.values.size(); ++i)
        t.data[i] = static_cast<T>(static_cast<float>(s.values[i]));
    return t;
}

template <typename T>
nn::Tensor<T> spec_tensor(const dsp::Spectrogram& s) {
    nn::Tensor<T> t({s.frames, s.bins});
    for (std::size_t i = 0; i < s.mag.size(); ++i)
        t.data[i] = static_cast<T>(static_cast<float>(s.mag[i]));
    return t;
}

template <typename T>
std::vector<T> to_vec(const nn::Tensor<T>& t) {
    return t.data;
}

}  // namespace detail

template <typename T>
void apply_bn_update(nn::ParamStore<T>& params, const BnUpdate<T>& update) {
    auto& rmean = params.at(update.prefix + ".rmean");
    auto& rvar = params.at(update.prefix + ".rvar");
    auto& count = params.at(update.prefix + ".count");
    const bool first = count.data[0] == T(0);
    const T momentum = T(0.1);
    for (std::size_t c = 0; c < rmean.data.size(); ++c) {
        if (first) {
            rmean.data[c] = update.stats.mean[c];
            rvar.data[c] = update.stats.var[c];
        } else {
            rmean.data[c] += momentum * (update.stats.mean[c] - rmean.data[c]);
            rvar.data[c] += momentum * (update.stats.var[c] - rvar.data[c]);
        }
    }
    if (count.data[0] < T(1e6)) count.data[0] += T(1);
    auto& global = params.at("bn.count");
    if (global.data[0] < T(1e6)) global.data[0] += T(1);
}

template <typename T>
nn::Var<T> forward_logits(nn::Graph<T>& g, nn::Binder<T>& bind, nn::ParamStore<T>& params,
                          const ModelConfig& config, const dsp::WindowFeatures& input,
                          bool training, Diagnostics<T>* diag,
                          std::vector<BnUpdate<T>>* bn_updates) {
    config.validate();
    const ModelDims& d = config.dims;
    if (static_cast<int>(input.series.size()) != d.pairs ||
        static_cast<int>(input.specs.size()) != d.pairs)
        throw ShapeError("model: window has " + std::to_string(input.series.size()) +
                         " pairs, config says " + std::to_string(d.pairs));
    if (!training && params.at("bn.count").data[0] == T(0) && config.use_me_branch())
        throw Error("model: uninitialized running stats (eval before any training batch)");

    // One conv block: conv -> BN -> ReLU -> maxpool. Collects the running
    // stats update in training mode.
    auto me_block = [&](nn::Var<T> x, const std::string& conv_name, const std::string& bn_prefix) {
        nn::Var<T> y = nn::conv1d_same(g, x, bind(params, conv_name));
        nn::BnStats<T> stats;
        const auto& rmean = params.at(bn_prefix + ".rmean").data;
        const auto& rvar = params.at(bn_prefix + ".rvar").data;
        nn::Var<T> out = nn::batchnorm_relu_maxpool<T>(
            g, y, bind(params, bn_prefix + ".gamma"), bind(params, bn_prefix + ".beta"), training,
            &rmean, &rvar, training ? &stats : nullptr, T(1e-5), d.pool);
        if (training && bn_updates) bn_updates->push_back({bn_prefix, std::move(stats)});
        return out;
    };

    std::vector<nn::Var<T>> head_parts;

    // Time attention GRU branch, one stack per pair (or shared).
    if (config.use_ta_branch()) {
        if (diag) diag->ta_attention.clear();
        for (int p = 0; p < d.pairs; ++p) {
            const std::string prefix =
                config.shared_gru ? "ta.shared" : "ta.p" + std::to_string(p);
            nn::Var<T> spec = g.value(detail::spec_tensor<T>(input.specs[static_cast<std::size_t>(p)]),
                                      "spectrogram");
            nn::GruVars<T> gru{bind(params, prefix + ".gru.Wz"), bind(params, prefix + ".gru.Wr"),
                               bind(params, prefix + ".gru.Wh"), bind(params, prefix + ".gru.Uz"),
                               bind(params, prefix + ".gru.Ur"), bind(params, prefix + ".gru.Uh"),
                               bind(params, prefix + ".gru.bz"), bind(params, prefix + ".gru.br"),
                               bind(params, prefix + ".gru.bh")};
            nn::Var<T> R = nn::gru_forward(g, spec, gru);

            nn::Var<T> latent;
            if (config.with_ta) {
                nn::AttentionVars<T> att{
                    bind(params, prefix + ".att.Wq"), bind(params, prefix + ".att.Wk"),
                    bind(params, prefix + ".att.Wv"), bind(params, prefix + ".out.W"),
                    bind(params, prefix + ".out.b")};
                auto out = nn::self_attention_residual(g, R, att);
                latent = out.latent;
                if (diag) diag->ta_attention.push_back(out.attention->val());
            } else {
                latent = nn::dense(g, g.mean_rows(R), bind(params, prefix + ".out.W"),
                                   bind(params, prefix + ".out.b"));
            }
            head_parts.push_back(latent);
        }
    }

    // Morphology extractor + antenna-pair attention branch.
    if (config.use_me_branch()) {
        std::vector<nn::Var<T>> maps;
        for (int p = 0; p < d.pairs; ++p) {
            const std::string prefix = "me.p" + std::to_string(p);
            nn::Var<T> x = g.value(detail::series_tensor<T>(input.series[static_cast<std::size_t>(p)]),
                                   "pair_series");
            nn::Var<T> e1 = me_block(x, prefix + ".conv1.k", prefix + ".bn1");
            maps.push_back(me_block(e1, prefix + ".conv2.k", prefix + ".bn2"));
        }
        nn::Var<T> concat = g.concat_rows(maps);  // [N x L]
        nn::Var<T> weighted = concat;
        if (config.with_pa) {
            nn::Var<T> pooled = nn::global_average_pool(g, concat);  // [1 x N]
            nn::Var<T> w = g.sigmoid(nn::conv1d_same(g, pooled, bind(params, "pa.eca.k")));
            weighted = g.scale_rows(concat, w);
            if (diag) {
                diag->pa_weights = w->val();
                diag->has_pa = true;
            }
        }
        head_parts.push_back(
            nn::dense(g, g.flatten(weighted), bind(params, "pa.out.W"), bind(params, "pa.out.b")));
    }

    nn::Var<T> features = head_parts.size() == 1 ? head_parts[0] : g.concat_cols(head_parts);
    nn::Var<T> hidden =
        g.relu(nn::dense(g, features, bind(params, "head.fc1.W"), bind(params, "head.fc1.b")));
    return nn::dense(g, hidden, bind(params, "head.fc2.W"), bind(params, "head.fc2.b"));
}

}  // namespace alesal::model
