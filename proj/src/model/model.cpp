// SPDX-License-Identifier: Apache-2.0
#include "alesal/model/model.hpp"

#include "alesal/common/num_format.hpp"
#include "alesal/nn/rng.hpp"

namespace alesal::model {

namespace {

using nn::ParamStore;
using nn::Rng;
using nn::Tensor;

void add_bn(ParamStore<float>& store, const std::string& prefix, int channels) {
    store.add(prefix + ".gamma", Tensor<float>({channels}, 1.0F));
    store.add(prefix + ".beta", Tensor<float>({channels}));
    store.add(prefix + ".rmean", Tensor<float>({channels}), false);
    store.add(prefix + ".rvar", Tensor<float>({channels}, 1.0F), false);
    store.add(prefix + ".count", Tensor<float>({1}), false);
}

void add_gru_stack(ParamStore<float>& store, const std::string& prefix, const ModelConfig& config,
                   Rng& rng) {
    const ModelDims& d = config.dims;
    for (const char* gate : {"Wz", "Wr", "Wh"})
        store.add(prefix + ".gru." + gate,
                  nn::init_uniform<float>({d.bins, d.gru_hidden}, d.bins, rng));
    for (const char* gate : {"Uz", "Ur", "Uh"})
        store.add(prefix + ".gru." + gate,
                  nn::init_uniform<float>({d.gru_hidden, d.gru_hidden}, d.gru_hidden, rng));
    for (const char* gate : {"bz", "br", "bh"})
        store.add(prefix + ".gru." + gate, Tensor<float>({d.gru_hidden}));
    if (config.with_ta) {
        for (const char* proj : {"Wq", "Wk", "Wv"})
            store.add(prefix + ".att." + proj,
                      nn::init_uniform<float>({d.gru_hidden, d.d_k}, d.gru_hidden, rng));
    }
    store.add(prefix + ".out.W",
              nn::init_uniform<float>({d.gru_hidden, d.ta_latent}, d.gru_hidden, rng));
    store.add(prefix + ".out.b", Tensor<float>({d.ta_latent}));
}

}  // namespace

nn::ParamStore<float> init_params(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    const ModelDims& d = config.dims;
    ParamStore<float> store;
    Rng rng(seed);

    if (config.use_ta_branch()) {
        if (config.shared_gru) {
            add_gru_stack(store, "ta.shared", config, rng);
        } else {
            for (int p = 0; p < d.pairs; ++p)
                add_gru_stack(store, "ta.p" + std::to_string(p), config, rng);
        }
    }

    if (config.use_me_branch()) {
        for (int p = 0; p < d.pairs; ++p) {
            const std::string prefix = "me.p" + std::to_string(p);
            store.add(prefix + ".conv1.k",
                      nn::init_uniform<float>({d.me_channels, 1, d.me_kernel}, d.me_kernel, rng));
            add_bn(store, prefix + ".bn1", d.me_channels);
            store.add(prefix + ".conv2.k",
                      nn::init_uniform<float>({d.me_channels, d.me_channels, d.me_kernel},
                                              d.me_channels * d.me_kernel, rng));
            add_bn(store, prefix + ".bn2", d.me_channels);
        }
        if (config.with_pa) {
            const int k = d.eca_k();
            store.add("pa.eca.k", nn::init_uniform<float>({1, 1, k}, k, rng));
        }
        const int flat = d.concat_channels() * d.me_out_len();
        store.add("pa.out.W", nn::init_uniform<float>({flat, d.pa_latent}, flat, rng));
        store.add("pa.out.b", Tensor<float>({d.pa_latent}));
    }

    const int head_in = config.head_input_dim();
    store.add("head.fc1.W", nn::init_uniform<float>({head_in, d.head_hidden}, head_in, rng));
    store.add("head.fc1.b", Tensor<float>({d.head_hidden}));
    store.add("head.fc2.W",
              nn::init_uniform<float>({d.head_hidden, d.classes}, d.head_hidden, rng));
    store.add("head.fc2.b", Tensor<float>({d.classes}));
    store.add("bn.count", Tensor<float>({1}), false);
    return store;
}

InferenceResult infer(nn::ParamStore<float>& params, const ModelConfig& config,
                      const dsp::WindowFeatures& input, bool want_diagnostics) {
    nn::Graph<float> g;
    nn::Binder<float> bind(g);
    Diagnostics<float> diag;
    nn::Var<float> logits = forward_logits<float>(g, bind, params, config, input, false,
                                                  want_diagnostics ? &diag : nullptr, nullptr);
    nn::Var<float> probs = g.softmax_rows(logits);

    InferenceResult result;
    result.diag = std::move(diag);
    int best = 0;
    for (int c = 0; c < config.dims.classes && c < 3; ++c) {
        result.probs[static_cast<std::size_t>(c)] = probs->val()(0, c);
        if (probs->val()(0, c) > probs->val()(0, best)) best = c;
    }
    result.predicted = best;
    return result;
}

model::LogitsBuilder make_builder(nn::ParamStore<float>& params, const ModelConfig& config) {
    return [&params, config](nn::Graph<float>& g, nn::Binder<float>& bind,
                             const dsp::WindowFeatures& input, bool training) {
        std::vector<BnUpdate<float>> updates;
        nn::Var<float> logits = forward_logits<float>(g, bind, params, config, input, training,
                                                      nullptr, training ? &updates : nullptr);
        for (const auto& u : updates) apply_bn_update(params, u);
        return logits;
    };
}

std::map<std::string, std::string> config_to_meta(const ModelConfig& config) {
    const ModelDims& d = config.dims;
    return {
        {"format", "alesal-model"},
        {"pairs", std::to_string(d.pairs)},
        {"series_len", std::to_string(d.series_len)},
        {"frames", std::to_string(d.frames)},
        {"bins", std::to_string(d.bins)},
        {"me_channels", std::to_string(d.me_channels)},
        {"me_kernel", std::to_string(d.me_kernel)},
        {"pool", std::to_string(d.pool)},
        {"gru_hidden", std::to_string(d.gru_hidden)},
        {"d_k", std::to_string(d.d_k)},
        {"ta_latent", std::to_string(d.ta_latent)},
        {"pa_latent", std::to_string(d.pa_latent)},
        {"head_hidden", std::to_string(d.head_hidden)},
        {"classes", std::to_string(d.classes)},
        {"eca_gamma", format_double(d.eca_gamma)},
        {"eca_b", format_double(d.eca_b)},
        {"with_ta", config.with_ta ? "1" : "0"},
        {"with_pa", config.with_pa ? "1" : "0"},
        {"amplitude_only", config.amplitude_only ? "1" : "0"},
        {"spectrum_only", config.spectrum_only ? "1" : "0"},
        {"shared_gru", config.shared_gru ? "1" : "0"},
    };
}

ModelConfig config_from_meta(const std::map<std::string, std::string>& meta) {
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = meta.find(key);
        if (it == meta.end()) throw Error("checkpoint: missing model meta key '" + key + "'");
        return it->second;
    };
    if (get("format") != "alesal-model") throw Error("checkpoint: not an alesal model");
    ModelConfig config;
    ModelDims& d = config.dims;
    d.pairs = static_cast<int>(parse_long(get("pairs"), "pairs"));
    d.series_len = static_cast<int>(parse_long(get("series_len"), "series_len"));
    d.frames = static_cast<int>(parse_long(get("frames"), "frames"));
    d.bins = static_cast<int>(parse_long(get("bins"), "bins"));
    d.me_channels = static_cast<int>(parse_long(get("me_channels"), "me_channels"));
    d.me_kernel = static_cast<int>(parse_long(get("me_kernel"), "me_kernel"));
    d.pool = static_cast<int>(parse_long(get("pool"), "pool"));
    d.gru_hidden = static_cast<int>(parse_long(get("gru_hidden"), "gru_hidden"));
    d.d_k = static_cast<int>(parse_long(get("d_k"), "d_k"));
    d.ta_latent = static_cast<int>(parse_long(get("ta_latent"), "ta_latent"));
    d.pa_latent = static_cast<int>(parse_long(get("pa_latent"), "pa_latent"));
    d.head_hidden = static_cast<int>(parse_long(get("head_hidden"), "head_hidden"));
    d.classes = static_cast<int>(parse_long(get("classes"), "classes"));
    d.eca_gamma = parse_double(get("eca_gamma"), "eca_gamma");
    d.eca_b = parse_double(get("eca_b"), "eca_b");
    config.with_ta = get("with_ta") == "1";
    config.with_pa = get("with_pa") == "1";
    config.amplitude_only = get("amplitude_only") == "1";
    config.spectrum_only = get("spectrum_only") == "1";
    config.shared_gru = get("shared_gru") == "1";
    config.validate();
    return config;
}

}  // namespace alesal::model
