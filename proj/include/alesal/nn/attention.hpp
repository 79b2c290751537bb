// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "alesal/nn/ops.hpp"

namespace alesal::nn {

// Projections of one single-head self-attention layer with residual output.
// Wq/Wk/Wv are [d_model x d_k]; the residual sum requires d_k == d_model.
// Wd/bd map the time-averaged post-attention features to the latent size.
template <typename T>
struct AttentionVars {
    Var<T> Wq, Wk, Wv;  // [d_model x d_k]
    Var<T> Wd;          // [d_model x latent]
    Var<T> bd;          // [latent]
};

template <typename T>
struct AttentionOut {
    Var<T> latent;     // [1 x latent]
    Var<T> attention;  // [T x T], rows sum to 1
};

// Scaled dot-product self-attention over R [T x d_model]:
//   A = softmax(Q K^T / sqrt(d_k)),  S = A V + R
// The [T x d] sequence is reduced by a time-mean before the output linear
// layer, which commutes with applying the linear layer per step.
template <typename T>
AttentionOut<T> self_attention_residual(Graph<T>& g, Var<T> R, const AttentionVars<T>& p) {
    const Tensor<T>& Rv = R->val();
    if (Rv.ndim() != 2 || Rv.rows() < 1)
        throw ShapeError("self_attention_residual: expected [T x d], got " + shape_str(Rv.shape));
    const int d_model = Rv.cols();
    const int d_k = p.Wq->val().cols();
    if (p.Wq->val().rows() != d_model || p.Wk->val().cols() != d_k || p.Wv->val().cols() != d_k)
        throw ShapeError("self_attention_residual: projection dims do not match d_model=" +
                         std::to_string(d_model) + ", d_k=" + std::to_string(d_k));
    if (d_k != d_model)
        throw ShapeError("self_attention_residual: residual connection requires d_k == d_model (" +
                         std::to_string(d_k) + " vs " + std::to_string(d_model) + ")");

    Var<T> Q = g.matmul(R, p.Wq);
    Var<T> K = g.matmul(R, p.Wk);
    Var<T> V = g.matmul(R, p.Wv);
    Var<T> scores = g.affine(g.matmul(Q, g.transpose(K)), T(1) / std::sqrt(static_cast<T>(d_k)), T(0));
    Var<T> A = g.softmax_rows(scores);
    Var<T> S = g.add(g.matmul(A, V), R);
    Var<T> latent = dense(g, g.mean_rows(S), p.Wd, p.bd);
    return {latent, A};
}

}  // namespace alesal::nn
