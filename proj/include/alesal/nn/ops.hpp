// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "alesal/nn/graph.hpp"

namespace alesal::nn {

// y = x W + b for x [batch x in], W [in x out], b [out].
template <typename T>
Var<T> dense(Graph<T>& g, Var<T> x, Var<T> W, Var<T> b) {
    return g.add_rowvec(g.matmul(x, W), b);
}

// 1-D cross-correlation. x [c_in x len], kernels [c_out x c_in x k].
// No bias term; the CNN blocks follow every conv with batch norm.
template <typename T>
Var<T> conv1d(Graph<T>& g, Var<T> x, Var<T> kernels, int stride = 1, int padding = 0) {
    const Tensor<T>& X = x->val();
    const Tensor<T>& K = kernels->val();
    if (X.ndim() != 2 || K.ndim() != 3)
        throw ShapeError("conv1d: expected x [c_in x len] and kernels [c_out x c_in x k], got " +
                         shape_str(X.shape) + " and " + shape_str(K.shape));
    const int c_in = X.shape[0], len = X.shape[1];
    const int c_out = K.shape[0], kc_in = K.shape[1], k = K.shape[2];
    if (kc_in != c_in)
        throw ShapeError("conv1d: kernel input channels " + std::to_string(kc_in) +
                         " != input channels " + std::to_string(c_in));
    if (stride < 1 || padding < 0) throw ShapeError("conv1d: invalid stride/padding");
    if (k > len + 2 * padding)
        throw ShapeError("conv1d: kernel size " + std::to_string(k) + " exceeds padded length " +
                         std::to_string(len + 2 * padding));
    const int len_out = (len + 2 * padding - k) / stride + 1;

    Tensor<T> out({c_out, len_out});
    const auto kat = [&](const Tensor<T>& W, int co, int ci, int kk) -> T {
        return W.data[(static_cast<std::size_t>(co) * c_in + ci) * k + kk];
    };
    for (int co = 0; co < c_out; ++co)
        for (int t = 0; t < len_out; ++t) {
            T acc = T(0);
            const int base = t * stride - padding;
            for (int ci = 0; ci < c_in; ++ci)
                for (int kk = 0; kk < k; ++kk) {
                    const int s = base + kk;
                    if (s >= 0 && s < len) acc += X(ci, s) * kat(K, co, ci, kk);
                }
            out(co, t) = acc;
        }

    Var<T> y = g.make(std::move(out), x->requires_grad || kernels->requires_grad, nullptr, "conv1d");
    y->backward = [x, kernels, y, c_in, len, c_out, k, stride, padding, len_out] {
        const Tensor<T>& X2 = x->val();
        const Tensor<T>& K2 = kernels->val();
        const auto kidx = [&](int co, int ci, int kk) {
            return (static_cast<std::size_t>(co) * c_in + ci) * k + kk;
        };
        if (x->requires_grad) {
            Tensor<T>& gx = x->ensure_grad();
            for (int co = 0; co < c_out; ++co)
                for (int t = 0; t < len_out; ++t) {
                    const T gy = y->grad(co, t);
                    if (gy == T(0)) continue;
                    const int base = t * stride - padding;
                    for (int ci = 0; ci < c_in; ++ci)
                        for (int kk = 0; kk < k; ++kk) {
                            const int s = base + kk;
                            if (s >= 0 && s < len) gx(ci, s) += gy * K2.data[kidx(co, ci, kk)];
                        }
                }
        }
        if (kernels->requires_grad) {
            Tensor<T>& gk = kernels->ensure_grad();
            for (int co = 0; co < c_out; ++co)
                for (int t = 0; t < len_out; ++t) {
                    const T gy = y->grad(co, t);
                    if (gy == T(0)) continue;
                    const int base = t * stride - padding;
                    for (int ci = 0; ci < c_in; ++ci)
                        for (int kk = 0; kk < k; ++kk) {
                            const int s = base + kk;
                            if (s >= 0 && s < len) gk.data[kidx(co, ci, kk)] += gy * X2(ci, s);
                        }
                }
        }
    };
    return y;
}

// Same-length convolution; requires odd kernel size.
template <typename T>
Var<T> conv1d_same(Graph<T>& g, Var<T> x, Var<T> kernels) {
    const int k = kernels->val().shape[2];
    if (k % 2 == 0) throw ShapeError("conv1d_same: kernel size must be odd, got " + std::to_string(k));
    return conv1d(g, x, kernels, 1, (k - 1) / 2);
}

// Per-channel statistics produced by a training-mode batch norm; the model
// folds these into its running estimates.
template <typename T>
struct BnStats {
    std::vector<T> mean;
    std::vector<T> var;  // biased (divide by L), same convention as the running buffers
};

// Training-mode batch norm over the length axis of x [C x L] with learnable
// per-channel scale gamma [C] and shift beta [C].
template <typename T>
Var<T> batchnorm_train(Graph<T>& g, Var<T> x, Var<T> gamma, Var<T> beta, T eps, BnStats<T>* stats_out) {
    const Tensor<T>& X = x->val();
    if (X.ndim() != 2) throw ShapeError("batchnorm: expected [C x L], got " + shape_str(X.shape));
    const int C = X.shape[0], L = X.shape[1];
    if (static_cast<int>(gamma->val().numel()) != C || static_cast<int>(beta->val().numel()) != C)
        throw ShapeError("batchnorm: scale/shift length must equal channel count");

    std::vector<T> mean(C), var(C), inv_std(C);
    for (int c = 0; c < C; ++c) {
        T m = T(0);
        for (int l = 0; l < L; ++l) m += X(c, l);
        m /= static_cast<T>(L);
        T v = T(0);
        for (int l = 0; l < L; ++l) {
            T d = X(c, l) - m;
            v += d * d;
        }
        v /= static_cast<T>(L);
        mean[c] = m;
        var[c] = v;
        inv_std[c] = T(1) / std::sqrt(v + eps);
    }
    if (stats_out) {
        stats_out->mean = mean;
        stats_out->var = var;
    }

    Tensor<T> out({C, L});
    for (int c = 0; c < C; ++c) {
        const T gmm = gamma->val().data[static_cast<std::size_t>(c)];
        const T bta = beta->val().data[static_cast<std::size_t>(c)];
        for (int l = 0; l < L; ++l) out(c, l) = gmm * (X(c, l) - mean[c]) * inv_std[c] + bta;
    }
    Var<T> y = g.make(std::move(out), x->requires_grad || gamma->requires_grad || beta->requires_grad,
                      nullptr, "batchnorm");
    y->backward = [x, gamma, beta, y, C, L, mean, inv_std] {
        const Tensor<T>& X2 = x->val();
        for (int c = 0; c < C; ++c) {
            const T istd = inv_std[c];
            const T gmm = gamma->val().data[static_cast<std::size_t>(c)];
            T sum_dy = T(0), sum_dy_xhat = T(0);
            for (int l = 0; l < L; ++l) {
                const T xhat = (X2(c, l) - mean[c]) * istd;
                sum_dy += y->grad(c, l);
                sum_dy_xhat += y->grad(c, l) * xhat;
            }
            if (gamma->requires_grad) gamma->ensure_grad().data[static_cast<std::size_t>(c)] += sum_dy_xhat;
            if (beta->requires_grad) beta->ensure_grad().data[static_cast<std::size_t>(c)] += sum_dy;
            if (x->requires_grad) {
                Tensor<T>& gx = x->ensure_grad();
                const T n = static_cast<T>(L);
                for (int l = 0; l < L; ++l) {
                    const T xhat = (X2(c, l) - mean[c]) * istd;
                    gx(c, l) += gmm * istd * (y->grad(c, l) - sum_dy / n - xhat * sum_dy_xhat / n);
                }
            }
        }
    };
    return y;
}

// Eval-mode batch norm using frozen running statistics.
template <typename T>
Var<T> batchnorm_eval(Graph<T>& g, Var<T> x, Var<T> gamma, Var<T> beta,
                      const std::vector<T>& running_mean, const std::vector<T>& running_var, T eps) {
    const Tensor<T>& X = x->val();
    if (X.ndim() != 2) throw ShapeError("batchnorm: expected [C x L], got " + shape_str(X.shape));
    const int C = X.shape[0], L = X.shape[1];
    if (static_cast<int>(running_mean.size()) != C || static_cast<int>(running_var.size()) != C)
        throw ShapeError("batchnorm: running stats length must equal channel count");
    Tensor<T> out({C, L});
    std::vector<T> scale(C);
    for (int c = 0; c < C; ++c) {
        scale[c] = gamma->val().data[static_cast<std::size_t>(c)] / std::sqrt(running_var[c] + eps);
        const T bta = beta->val().data[static_cast<std::size_t>(c)];
        for (int l = 0; l < L; ++l) out(c, l) = scale[c] * (X(c, l) - running_mean[c]) + bta;
    }
    Var<T> y = g.make(std::move(out), x->requires_grad, nullptr, "batchnorm_eval");
    y->backward = [x, y, C, L, scale] {
        if (!x->requires_grad) return;
        Tensor<T>& gx = x->ensure_grad();
        for (int c = 0; c < C; ++c)
            for (int l = 0; l < L; ++l) gx(c, l) += scale[c] * y->grad(c, l);
    };
    return y;
}

// Max pooling over the length axis; ties resolve to the first index so the
// backward routing is deterministic.
template <typename T>
Var<T> maxpool1d(Graph<T>& g, Var<T> x, int window, int stride) {
    const Tensor<T>& X = x->val();
    if (X.ndim() != 2) throw ShapeError("maxpool1d: expected [C x L], got " + shape_str(X.shape));
    const int C = X.shape[0], L = X.shape[1];
    if (window < 1 || stride < 1 || window > L)
        throw ShapeError("maxpool1d: window " + std::to_string(window) + " invalid for length " +
                         std::to_string(L));
    const int L_out = (L - window) / stride + 1;
    Tensor<T> out({C, L_out});
    std::vector<int> argmax(static_cast<std::size_t>(C) * L_out);
    for (int c = 0; c < C; ++c)
        for (int t = 0; t < L_out; ++t) {
            int best = t * stride;
            T bv = X(c, best);
            for (int kk = 1; kk < window; ++kk) {
                const int s = t * stride + kk;
                if (X(c, s) > bv) {
                    bv = X(c, s);
                    best = s;
                }
            }
            out(c, t) = bv;
            argmax[static_cast<std::size_t>(c) * L_out + t] = best;
        }
    Var<T> y = g.make(std::move(out), x->requires_grad, nullptr, "maxpool1d");
    y->backward = [x, y, C, L_out, argmax] {
        if (!x->requires_grad) return;
        Tensor<T>& gx = x->ensure_grad();
        for (int c = 0; c < C; ++c)
            for (int t = 0; t < L_out; ++t)
                gx(c, argmax[static_cast<std::size_t>(c) * L_out + t]) += y->grad(c, t);
    };
    return y;
}

// The generic CNN block tail: batch norm, ReLU, max pooling (window 3,
// stride 3). Training mode reports batch statistics through stats_out; eval
// mode consumes running statistics.
template <typename T>
Var<T> batchnorm_relu_maxpool(Graph<T>& g, Var<T> x, Var<T> gamma, Var<T> beta, bool training,
                              const std::vector<T>* running_mean, const std::vector<T>* running_var,
                              BnStats<T>* stats_out, T eps = T(1e-5), int pool = 3) {
    Var<T> y;
    if (training) {
        y = batchnorm_train(g, x, gamma, beta, eps, stats_out);
    } else {
        if (!running_mean || !running_var)
            throw Error("batchnorm: uninitialized running stats (eval before any training batch)");
        y = batchnorm_eval(g, x, gamma, beta, *running_mean, *running_var, eps);
    }
    return maxpool1d(g, g.relu(y), pool, pool);
}

// Global average pooling of E [N x L] to a [1 x N] row vector.
template <typename T>
Var<T> global_average_pool(Graph<T>& g, Var<T> E) {
    const Tensor<T>& X = E->val();
    if (X.ndim() != 2 || X.shape[1] < 1)
        throw ShapeError("global_average_pool: expected [N x L], L >= 1, got " + shape_str(X.shape));
    return g.mean_rows(g.transpose(E));
}

// Mean cross-entropy over a batch of logits [B x C] with integer labels.
// Log-probabilities are clamped at log(1e-12); backward is
// (softmax - onehot) / B.
template <typename T>
Var<T> softmax_cross_entropy(Graph<T>& g, Var<T> logits, const std::vector<int>& labels) {
    const Tensor<T>& X = logits->val();
    if (X.ndim() != 2 || static_cast<int>(labels.size()) != X.rows())
        throw ShapeError("softmax_cross_entropy: logits " + shape_str(X.shape) + " vs " +
                         std::to_string(labels.size()) + " labels");
    const int B = X.rows(), C = X.cols();
    for (int i = 0; i < B; ++i)
        if (labels[i] < 0 || labels[i] >= C)
            throw Error("softmax_cross_entropy: label " + std::to_string(labels[i]) + " out of range");

    Tensor<T> probs({B, C});
    T loss = T(0);
    const T floor_logp = std::log(T(1e-12));
    for (int i = 0; i < B; ++i) {
        T mx = X(i, 0);
        for (int j = 1; j < C; ++j) mx = std::max(mx, X(i, j));
        T sum = T(0);
        for (int j = 0; j < C; ++j) sum += std::exp(X(i, j) - mx);
        const T lse = mx + std::log(sum);
        for (int j = 0; j < C; ++j) probs(i, j) = std::exp(X(i, j) - lse);
        loss -= std::max(X(i, labels[i]) - lse, floor_logp);
    }
    loss /= static_cast<T>(B);

    Var<T> y = g.make(Tensor<T>({1, 1}, {loss}), logits->requires_grad, nullptr, "softmax_cross_entropy");
    y->backward = [logits, y, probs, labels, B, C] {
        if (!logits->requires_grad) return;
        Tensor<T>& gx = logits->ensure_grad();
        const T scale = y->grad(0, 0) / static_cast<T>(B);
        for (int i = 0; i < B; ++i)
            for (int j = 0; j < C; ++j)
                gx(i, j) += scale * (probs(i, j) - (j == labels[i] ? T(1) : T(0)));
    };
    return y;
}

}  // namespace alesal::nn
