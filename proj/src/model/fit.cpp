// SPDX-License-Identifier: Apache-2.0
#include "alesal/model/fit.hpp"

#include <cmath>

#include "alesal/nn/adam.hpp"
#include "alesal/nn/ops.hpp"
#include "alesal/nn/rng.hpp"

namespace alesal::model {

namespace {

int argmax_row(const nn::Tensor<float>& t) {
    int best = 0;
    for (int c = 1; c < t.cols(); ++c)
        if (t(0, c) > t(0, best)) best = c;
    return best;
}

struct SampleResult {
    double loss = 0;
    bool correct = false;
};

SampleResult run_sample(const LogitsBuilder& builder, const dsp::WindowFeatures& sample,
                        bool training, bool backward) {
    nn::Graph<float> g;
    nn::Binder<float> bind(g);
    nn::Var<float> logits = builder(g, bind, sample, training);
    nn::Var<float> loss = nn::softmax_cross_entropy(g, logits, {sample.label});
    if (backward) {
        g.backward(loss);
        bind.harvest();
    }
    return {static_cast<double>(loss->val()(0, 0)), argmax_row(logits->val()) == sample.label};
}

}  // namespace

std::pair<double, double> evaluate_loss(const LogitsBuilder& builder,
                                        const std::vector<dsp::WindowFeatures>& samples) {
    if (samples.empty()) return {0.0, 0.0};
    double loss = 0;
    int correct = 0;
    for (const auto& s : samples) {
        SampleResult r = run_sample(builder, s, false, false);
        loss += r.loss;
        correct += r.correct ? 1 : 0;
    }
    return {loss / static_cast<double>(samples.size()),
            static_cast<double>(correct) / static_cast<double>(samples.size())};
}

FitHistory fit(nn::ParamStore<float>& params, const LogitsBuilder& builder,
               const std::vector<dsp::WindowFeatures>& train,
               const std::vector<dsp::WindowFeatures>& val, const FitConfig& config) {
    if (train.empty()) throw Error("fit: empty training set");
    for (const auto& s : train)
        if (s.label < 0) throw Error("fit: unlabeled training window");

    nn::Rng rng(config.seed ^ 0x5eed5eedULL);
    nn::Adam<float> adam(config.lr, config.beta1, config.beta2);

    FitHistory history;
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<nn::Tensor<float>> best_values;
    double best_val = 0;
    int since_best = 0;
    const bool early_stopping = !val.empty();

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        // Fisher-Yates with the run's own stream.
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j =
                static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
            std::swap(order[i - 1], order[j]);
        }

        double epoch_loss = 0;
        int epoch_correct = 0;
        try {
            for (std::size_t start = 0; start < order.size();
                 start += static_cast<std::size_t>(config.batch_size)) {
                const std::size_t end =
                    std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
                params.zero_grads();
                for (std::size_t i = start; i < end; ++i) {
                    SampleResult r = run_sample(builder, train[order[i]], true, true);
                    if (!std::isfinite(r.loss)) throw Error("loss is not finite");
                    epoch_loss += r.loss;
                    epoch_correct += r.correct ? 1 : 0;
                }
                adam.step(params, 1.0F / static_cast<float>(end - start));
            }
        } catch (const Error& e) {
            throw TrainDivergence(epoch, e.what());
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss / static_cast<double>(train.size());
        stats.train_acc = static_cast<double>(epoch_correct) / static_cast<double>(train.size());
        if (early_stopping) {
            auto [vloss, vacc] = evaluate_loss(builder, val);
            stats.val_loss = vloss;
            stats.val_acc = vacc;
        }
        stats.param_hash = params.value_hash();
        history.epochs.push_back(stats);
        if (config.on_epoch) config.on_epoch(stats);

        if (early_stopping) {
            if (history.best_epoch < 0 || stats.val_loss < best_val - 1e-9) {
                best_val = stats.val_loss;
                history.best_epoch = epoch;
                history.best_val_loss = best_val;
                since_best = 0;
                best_values.clear();
                for (const auto& e : params.entries()) best_values.push_back(e.value);
            } else if (++since_best > config.patience) {
                break;
            }
        }
    }

    if (early_stopping && config.restore_best && !best_values.empty()) {
        auto& entries = params.entries();
        for (std::size_t i = 0; i < entries.size(); ++i) entries[i].value = best_values[i];
    }
    if (!early_stopping) {
        history.best_epoch = static_cast<int>(history.epochs.size()) - 1;
        history.best_val_loss = 0;
    }
    return history;
}

}  // namespace alesal::model
