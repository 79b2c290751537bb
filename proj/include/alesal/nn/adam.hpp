// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "alesal/nn/params.hpp"

namespace alesal::nn {

// Adam with bias correction. State is keyed by parameter name; updates run
// in store order, elementwise, so training stays bit-deterministic.
template <typename T>
class Adam {
public:
    explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    // grad_scale is applied to the accumulated gradients before the update
    // (the training loop sums per-sample gradients over a batch).
    void step(ParamStore<T>& params, T grad_scale = T(1)) {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, t_);
        const double bc2 = 1.0 - std::pow(beta2_, t_);
        for (auto& e : params.entries()) {
            if (!e.trainable) continue;
            auto& slot = state_[e.name];
            if (slot.m.size() != e.value.data.size()) {
                slot.m.assign(e.value.data.size(), T(0));
                slot.v.assign(e.value.data.size(), T(0));
            }
            for (std::size_t i = 0; i < e.value.data.size(); ++i) {
                const double gval = static_cast<double>(e.grad.data[i]) * grad_scale;
                slot.m[i] = static_cast<T>(beta1_ * slot.m[i] + (1.0 - beta1_) * gval);
                slot.v[i] = static_cast<T>(beta2_ * slot.v[i] + (1.0 - beta2_) * gval * gval);
                const double mhat = slot.m[i] / bc1;
                const double vhat = slot.v[i] / bc2;
                e.value.data[i] -= static_cast<T>(lr_ * mhat / (std::sqrt(vhat) + eps_));
            }
        }
    }

    int steps() const { return t_; }

private:
    struct Slot {
        std::vector<T> m, v;
    };
    double lr_, beta1_, beta2_, eps_;
    int t_ = 0;
    std::unordered_map<std::string, Slot> state_;
};

}  // namespace alesal::nn
