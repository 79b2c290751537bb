// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "alesal/nn/ops.hpp"

namespace alesal::nn {

// Gate weights of one GRU layer, bound into a graph. W* act on the input,
// U* on the previous hidden state; update (z), reset (r), candidate (h).
template <typename T>
struct GruVars {
    Var<T> Wz, Wr, Wh;  // [in x hidden]
    Var<T> Uz, Ur, Uh;  // [hidden x hidden]
    Var<T> bz, br, bh;  // [hidden]
};

// Standard reset-before-candidate GRU recurrence over seq [T x in]:
//   z_t = sigmoid(x W_z + h U_z + b_z)
//   r_t = sigmoid(x W_r + h U_r + b_r)
//   hc  = tanh(x W_h + (r . h) U_h + b_h)
//   h_t = (1 - z) . h_{t-1} + z . hc
// Returns the full hidden sequence [T x hidden].
template <typename T>
Var<T> gru_forward(Graph<T>& g, Var<T> seq, const GruVars<T>& p, const Tensor<T>* h0 = nullptr) {
    const Tensor<T>& S = seq->val();
    if (S.ndim() != 2 || S.rows() < 1)
        throw ShapeError("gru_forward: expected [T x in] with T >= 1, got " + shape_str(S.shape));
    const int steps = S.rows();
    const int hidden = p.Uz->val().rows();

    Var<T> h;
    if (h0) {
        if (static_cast<int>(h0->numel()) != hidden) throw ShapeError("gru_forward: bad h0 length");
        Tensor<T> init({1, hidden}, h0->data);
        h = g.value(std::move(init), "gru_h0");
    } else {
        h = g.value(Tensor<T>({1, hidden}), "gru_h0");
    }

    std::vector<Var<T>> states;
    states.reserve(static_cast<std::size_t>(steps));
    for (int t = 0; t < steps; ++t) {
        try {
            Var<T> x = g.row(seq, t);
            Var<T> z = g.sigmoid(g.add(dense(g, x, p.Wz, p.bz), g.matmul(h, p.Uz)));
            Var<T> r = g.sigmoid(g.add(dense(g, x, p.Wr, p.br), g.matmul(h, p.Ur)));
            Var<T> hc = g.tanh_op(g.add(dense(g, x, p.Wh, p.bh), g.matmul(g.mul(r, h), p.Uh)));
            h = g.add(g.mul(g.affine(z, T(-1), T(1)), h), g.mul(z, hc));
        } catch (const Error& e) {
            throw Error("gru_forward: step " + std::to_string(t) + ": " + e.what());
        }
        states.push_back(h);
    }
    return g.concat_rows(states);
}

}  // namespace alesal::nn
