// SPDX-License-Identifier: Apache-2.0
#include "alesal/eval/dmlp.hpp"

#include "alesal/nn/ops.hpp"
#include "alesal/nn/rng.hpp"

namespace alesal::eval {

nn::ParamStore<float> init_dmlp(const DmlpConfig& config, std::uint64_t seed) {
    nn::ParamStore<float> store;
    nn::Rng rng(seed);
    int in = config.input_dim();
    for (std::size_t layer = 0; layer < config.hidden.size(); ++layer) {
        const int out = config.hidden[layer];
        const std::string name = "fc" + std::to_string(layer + 1);
        store.add(name + ".W", nn::init_uniform<float>({in, out}, in, rng));
        store.add(name + ".b", nn::Tensor<float>({out}));
        in = out;
    }
    store.add("out.W", nn::init_uniform<float>({in, config.classes}, in, rng));
    store.add("out.b", nn::Tensor<float>({config.classes}));
    return store;
}

nn::Var<float> dmlp_logits(nn::Graph<float>& g, nn::Binder<float>& bind,
                           nn::ParamStore<float>& params, const DmlpConfig& config,
                           const dsp::WindowFeatures& input) {
    if (static_cast<int>(input.series.size()) != config.pairs)
        throw ShapeError("dmlp: window has " + std::to_string(input.series.size()) +
                         " pairs, config says " + std::to_string(config.pairs));
    nn::Tensor<float> flat({1, config.input_dim()});
    std::size_t k = 0;
    for (const auto& series : input.series) {
        if (static_cast<int>(series.values.size()) != config.series_len)
            throw ShapeError("dmlp: series length mismatch");
        for (double v : series.values) flat.data[k++] = static_cast<float>(v);
    }
    nn::Var<float> x = g.value(std::move(flat), "dmlp_input");
    for (std::size_t layer = 0; layer < config.hidden.size(); ++layer) {
        const std::string name = "fc" + std::to_string(layer + 1);
        x = g.relu(nn::dense(g, x, bind(params, name + ".W"), bind(params, name + ".b")));
    }
    return nn::dense(g, x, bind(params, "out.W"), bind(params, "out.b"));
}

model::LogitsBuilder make_dmlp_builder(nn::ParamStore<float>& params, const DmlpConfig& config) {
    return [&params, config](nn::Graph<float>& g, nn::Binder<float>& bind,
                             const dsp::WindowFeatures& input, bool /*training*/) {
        return dmlp_logits(g, bind, params, config, input);
    };
}

}  // namespace alesal::eval
