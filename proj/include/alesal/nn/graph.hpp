// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "alesal/nn/tensor.hpp"

namespace alesal::nn {

// One value in a reverse-mode computation graph. Nodes are created and
// evaluated eagerly; each op stores a closure that scatters the node's
// gradient into its parents.
template <typename T>
struct Node {
    Tensor<T> value;                  // owned output (unused when external is set)
    const Tensor<T>* external = nullptr;  // leaves may alias parameter storage
    Tensor<T> grad;                   // allocated lazily during backward
    bool requires_grad = false;
    bool grad_ready = false;
    std::function<void()> backward;

    const Tensor<T>& val() const { return external ? *external : value; }

    Tensor<T>& ensure_grad() {
        if (!grad_ready) {
            grad = Tensor<T>(val().shape);
            grad_ready = true;
        }
        return grad;
    }
};

template <typename T>
using Var = Node<T>*;

// Eager define-by-run graph over 1-D/2-D/3-D tensors. Creation order is a
// topological order, so backward() is a single reverse sweep.
template <typename T>
class Graph {
public:
    // Non-finite outputs are always an error; the check costs one read pass
    // per op, negligible next to the matmuls.
    bool check_finite = true;

    // --- leaves ---------------------------------------------------------

    Var<T> value(Tensor<T> v, const char* what = "value") {
        return make(std::move(v), false, nullptr, what);
    }

    Var<T> leaf(Tensor<T> v, bool requires_grad, const char* what = "leaf") {
        return make(std::move(v), requires_grad, nullptr, what);
    }

    // Differentiable leaf aliasing external parameter storage (no copy).
    // The storage must outlive the graph.
    Var<T> param(const Tensor<T>& storage) {
        auto node = std::make_unique<Node<T>>();
        node->external = &storage;
        node->requires_grad = true;
        Var<T> v = node.get();
        nodes_.push_back(std::move(node));
        return v;
    }

    // --- matrix ops ------------------------------------------------------

    Var<T> matmul(Var<T> a, Var<T> b) {
        const Tensor<T>& A = a->val();
        const Tensor<T>& B = b->val();
        require(A.ndim() == 2 && B.ndim() == 2 && A.cols() == B.rows(), "matmul", a, b);
        const int m = A.rows(), k = A.cols(), n = B.cols();
        Tensor<T> out({m, n});
        matmul_raw(A.data.data(), B.data.data(), out.data.data(), m, k, n, false);
        Var<T> y = make(std::move(out), a->requires_grad || b->requires_grad, nullptr, "matmul");
        y->backward = [a, b, y] {
            const Tensor<T>& A2 = a->val();
            const Tensor<T>& B2 = b->val();
            const int m2 = A2.rows(), k2 = A2.cols(), n2 = B2.cols();
            if (a->requires_grad) {
                // dA = dY * B^T
                Tensor<T>& ga = a->ensure_grad();
                for (int i = 0; i < m2; ++i)
                    for (int j = 0; j < n2; ++j) {
                        T g = y->grad(i, j);
                        if (g == T(0)) continue;
                        const T* brow = B2.data.data();
                        for (int p = 0; p < k2; ++p) ga(i, p) += g * brow[p * n2 + j];
                    }
            }
            if (b->requires_grad) {
                // dB = A^T * dY
                Tensor<T>& gb = b->ensure_grad();
                for (int i = 0; i < m2; ++i)
                    for (int p = 0; p < k2; ++p) {
                        T av = A2(i, p);
                        if (av == T(0)) continue;
                        for (int j = 0; j < n2; ++j) gb(p, j) += av * y->grad(i, j);
                    }
            }
        };
        return y;
    }

    Var<T> transpose(Var<T> x) {
        const Tensor<T>& X = x->val();
        require(X.ndim() == 2, "transpose", x);
        const int m = X.rows(), n = X.cols();
        Tensor<T> out({n, m});
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) out(j, i) = X(i, j);
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "transpose");
        y->backward = [x, y, m, n] {
            if (!x->requires_grad) return;
            Tensor<T>& gx = x->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) gx(i, j) += y->grad(j, i);
        };
        return y;
    }

    // --- elementwise -----------------------------------------------------

    Var<T> add(Var<T> a, Var<T> b) {
        const Tensor<T>& A = a->val();
        const Tensor<T>& B = b->val();
        require(A.same_shape(B), "add", a, b);
        Tensor<T> out = A;
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += B.data[i];
        Var<T> y = make(std::move(out), a->requires_grad || b->requires_grad, nullptr, "add");
        y->backward = [a, b, y] {
            if (a->requires_grad) {
                Tensor<T>& g = a->ensure_grad();
                for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += y->grad.data[i];
            }
            if (b->requires_grad) {
                Tensor<T>& g = b->ensure_grad();
                for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += y->grad.data[i];
            }
        };
        return y;
    }

    // x [m x n] + row vector v [n] broadcast over rows.
    Var<T> add_rowvec(Var<T> x, Var<T> v) {
        const Tensor<T>& X = x->val();
        const Tensor<T>& V = v->val();
        require(X.ndim() == 2 && static_cast<int>(V.numel()) == X.cols(), "add_rowvec", x, v);
        Tensor<T> out = X;
        const int m = X.rows(), n = X.cols();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) out(i, j) += V.data[static_cast<std::size_t>(j)];
        Var<T> y = make(std::move(out), x->requires_grad || v->requires_grad, nullptr, "add_rowvec");
        y->backward = [x, v, y, m, n] {
            if (x->requires_grad) {
                Tensor<T>& g = x->ensure_grad();
                for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += y->grad.data[i];
            }
            if (v->requires_grad) {
                Tensor<T>& g = v->ensure_grad();
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < n; ++j) g.data[static_cast<std::size_t>(j)] += y->grad(i, j);
            }
        };
        return y;
    }

    Var<T> mul(Var<T> a, Var<T> b) {
        const Tensor<T>& A = a->val();
        const Tensor<T>& B = b->val();
        require(A.same_shape(B), "mul", a, b);
        Tensor<T> out = A;
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= B.data[i];
        Var<T> y = make(std::move(out), a->requires_grad || b->requires_grad, nullptr, "mul");
        y->backward = [a, b, y] {
            if (a->requires_grad) {
                Tensor<T>& g = a->ensure_grad();
                const Tensor<T>& B2 = b->val();
                for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += y->grad.data[i] * B2.data[i];
            }
            if (b->requires_grad) {
                Tensor<T>& g = b->ensure_grad();
                const Tensor<T>& A2 = a->val();
                for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += y->grad.data[i] * A2.data[i];
            }
        };
        return y;
    }

    // alpha * x + beta with constants.
    Var<T> affine(Var<T> x, T alpha, T beta) {
        Tensor<T> out = x->val();
        for (T& v : out.data) v = alpha * v + beta;
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "affine");
        y->backward = [x, y, alpha] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += alpha * y->grad.data[i];
        };
        return y;
    }

    Var<T> sigmoid(Var<T> x) {
        Tensor<T> out = x->val();
        for (T& v : out.data) v = T(1) / (T(1) + std::exp(-v));
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "sigmoid");
        y->backward = [x, y] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            for (std::size_t i = 0; i < g.data.size(); ++i) {
                T s = y->val().data[i];
                g.data[i] += y->grad.data[i] * s * (T(1) - s);
            }
        };
        return y;
    }

    Var<T> tanh_op(Var<T> x) {
        Tensor<T> out = x->val();
        for (T& v : out.data) v = std::tanh(v);
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "tanh");
        y->backward = [x, y] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            for (std::size_t i = 0; i < g.data.size(); ++i) {
                T t = y->val().data[i];
                g.data[i] += y->grad.data[i] * (T(1) - t * t);
            }
        };
        return y;
    }

    Var<T> relu(Var<T> x) {
        Tensor<T> out = x->val();
        for (T& v : out.data) v = v > T(0) ? v : T(0);
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "relu");
        y->backward = [x, y] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            const Tensor<T>& X = x->val();
            for (std::size_t i = 0; i < g.data.size(); ++i)
                if (X.data[i] > T(0)) g.data[i] += y->grad.data[i];
        };
        return y;
    }

    // Row-wise softmax of a 2-D tensor, numerically stable.
    Var<T> softmax_rows(Var<T> x) {
        const Tensor<T>& X = x->val();
        require(X.ndim() == 2, "softmax_rows", x);
        const int m = X.rows(), n = X.cols();
        Tensor<T> out({m, n});
        for (int i = 0; i < m; ++i) {
            T mx = X(i, 0);
            for (int j = 1; j < n; ++j) mx = std::max(mx, X(i, j));
            T sum = T(0);
            for (int j = 0; j < n; ++j) {
                T e = std::exp(X(i, j) - mx);
                out(i, j) = e;
                sum += e;
            }
            for (int j = 0; j < n; ++j) out(i, j) /= sum;
        }
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "softmax_rows");
        y->backward = [x, y, m, n] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            const Tensor<T>& S = y->val();
            for (int i = 0; i < m; ++i) {
                T dot = T(0);
                for (int j = 0; j < n; ++j) dot += y->grad(i, j) * S(i, j);
                for (int j = 0; j < n; ++j) g(i, j) += S(i, j) * (y->grad(i, j) - dot);
            }
        };
        return y;
    }

    // --- shape ops -------------------------------------------------------

    Var<T> row(Var<T> x, int index) {
        const Tensor<T>& X = x->val();
        require(X.ndim() == 2 && index >= 0 && index < X.rows(), "row", x);
        const int n = X.cols();
        Tensor<T> out({1, n});
        for (int j = 0; j < n; ++j) out(0, j) = X(index, j);
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "row");
        y->backward = [x, y, index, n] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            for (int j = 0; j < n; ++j) g(index, j) += y->grad(0, j);
        };
        return y;
    }

    // Stack 2-D blocks with equal column counts along the row axis.
    Var<T> concat_rows(const std::vector<Var<T>>& parts) {
        require(!parts.empty(), "concat_rows");
        const int n = parts[0]->val().cols();
        int m = 0;
        bool rg = false;
        for (Var<T> p : parts) {
            require(p->val().ndim() == 2 && p->val().cols() == n, "concat_rows", p);
            m += p->val().rows();
            rg = rg || p->requires_grad;
        }
        Tensor<T> out({m, n});
        int r = 0;
        for (Var<T> p : parts) {
            const Tensor<T>& P = p->val();
            std::copy(P.data.begin(), P.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(r) * n);
            r += P.rows();
        }
        Var<T> y = make(std::move(out), rg, nullptr, "concat_rows");
        std::vector<Var<T>> ps = parts;
        y->backward = [ps, y, n] {
            int r2 = 0;
            for (Var<T> p : ps) {
                const int pr = p->val().rows();
                if (p->requires_grad) {
                    Tensor<T>& g = p->ensure_grad();
                    for (int i = 0; i < pr; ++i)
                        for (int j = 0; j < n; ++j) g(i, j) += y->grad(r2 + i, j);
                }
                r2 += pr;
            }
        };
        return y;
    }

    // Concatenate row vectors / matrices with equal row counts along columns.
    Var<T> concat_cols(const std::vector<Var<T>>& parts) {
        require(!parts.empty(), "concat_cols");
        const int m = parts[0]->val().rows();
        int n = 0;
        bool rg = false;
        for (Var<T> p : parts) {
            require(p->val().ndim() == 2 && p->val().rows() == m, "concat_cols", p);
            n += p->val().cols();
            rg = rg || p->requires_grad;
        }
        Tensor<T> out({m, n});
        int c = 0;
        for (Var<T> p : parts) {
            const Tensor<T>& P = p->val();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < P.cols(); ++j) out(i, c + j) = P(i, j);
            c += P.cols();
        }
        Var<T> y = make(std::move(out), rg, nullptr, "concat_cols");
        std::vector<Var<T>> ps = parts;
        y->backward = [ps, y, m] {
            int c2 = 0;
            for (Var<T> p : ps) {
                const int pc = p->val().cols();
                if (p->requires_grad) {
                    Tensor<T>& g = p->ensure_grad();
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < pc; ++j) g(i, j) += y->grad(i, c2 + j);
                }
                c2 += pc;
            }
        };
        return y;
    }

    Var<T> mean_rows(Var<T> x) {
        const Tensor<T>& X = x->val();
        require(X.ndim() == 2 && X.rows() >= 1, "mean_rows", x);
        const int m = X.rows(), n = X.cols();
        Tensor<T> out({1, n});
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) out(0, j) += X(i, j);
        for (int j = 0; j < n; ++j) out(0, j) /= static_cast<T>(m);
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "mean_rows");
        y->backward = [x, y, m, n] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) g(i, j) += y->grad(0, j) / static_cast<T>(m);
        };
        return y;
    }

    Var<T> flatten(Var<T> x) {
        Tensor<T> out({1, static_cast<int>(x->val().numel())}, x->val().data);
        Var<T> y = make(std::move(out), x->requires_grad, nullptr, "flatten");
        y->backward = [x, y] {
            if (!x->requires_grad) return;
            Tensor<T>& g = x->ensure_grad();
            for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += y->grad.data[i];
        };
        return y;
    }

    // Scale row i of x [m x n] by s(0, i); s is a [1 x m] row vector.
    Var<T> scale_rows(Var<T> x, Var<T> s) {
        const Tensor<T>& X = x->val();
        const Tensor<T>& S = s->val();
        require(X.ndim() == 2 && static_cast<int>(S.numel()) == X.rows(), "scale_rows", x, s);
        const int m = X.rows(), n = X.cols();
        Tensor<T> out({m, n});
        for (int i = 0; i < m; ++i) {
            T w = S.data[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) out(i, j) = X(i, j) * w;
        }
        Var<T> y = make(std::move(out), x->requires_grad || s->requires_grad, nullptr, "scale_rows");
        y->backward = [x, s, y, m, n] {
            const Tensor<T>& X2 = x->val();
            const Tensor<T>& S2 = s->val();
            if (x->requires_grad) {
                Tensor<T>& g = x->ensure_grad();
                for (int i = 0; i < m; ++i) {
                    T w = S2.data[static_cast<std::size_t>(i)];
                    for (int j = 0; j < n; ++j) g(i, j) += y->grad(i, j) * w;
                }
            }
            if (s->requires_grad) {
                Tensor<T>& g = s->ensure_grad();
                for (int i = 0; i < m; ++i) {
                    T acc = T(0);
                    for (int j = 0; j < n; ++j) acc += y->grad(i, j) * X2(i, j);
                    g.data[static_cast<std::size_t>(i)] += acc;
                }
            }
        };
        return y;
    }

    // --- backward --------------------------------------------------------

    // Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse creation
    // order. `loss` must be scalar (1 element).
    void backward(Var<T> loss) {
        if (loss->val().numel() != 1)
            throw ShapeError("backward: loss must be scalar, got " + shape_str(loss->val().shape));
        loss->ensure_grad().data[0] = T(1);
        for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
            Node<T>* n = it->get();
            if (n->grad_ready && n->backward) n->backward();
        }
    }

    std::size_t size() const { return nodes_.size(); }

    Var<T> make(Tensor<T> v, bool requires_grad, std::function<void()> fn, const char* what) {
        if (check_finite && !v.all_finite())
            throw Error(std::string("non-finite values in output of ") + what);
        auto node = std::make_unique<Node<T>>();
        node->value = std::move(v);
        node->requires_grad = requires_grad;
        node->backward = std::move(fn);
        Var<T> out = node.get();
        nodes_.push_back(std::move(node));
        return out;
    }

private:
    std::vector<std::unique_ptr<Node<T>>> nodes_;

    static void matmul_raw(const T* a, const T* b, T* c, int m, int k, int n, bool /*acc*/) {
        for (int i = 0; i < m; ++i) {
            T* crow = c + static_cast<std::size_t>(i) * n;
            const T* arow = a + static_cast<std::size_t>(i) * k;
            for (int p = 0; p < k; ++p) {
                T av = arow[p];
                if (av == T(0)) continue;
                const T* brow = b + static_cast<std::size_t>(p) * n;
                for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
            }
        }
    }

    static void require(bool cond, const char* op) {
        if (!cond) throw ShapeError(std::string(op) + ": invalid arguments");
    }
    static void require(bool cond, const char* op, Var<T> a, Var<T> b = nullptr) {
        if (cond) return;
        std::string msg = std::string(op) + ": shape mismatch: " + shape_str(a->val().shape);
        if (b) msg += " vs " + shape_str(b->val().shape);
        throw ShapeError(msg);
    }
};

}  // namespace alesal::nn
