// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alesal/nn/graph.hpp"
#include "alesal/nn/hash.hpp"
#include "alesal/nn/rng.hpp"

namespace alesal::nn {

template <typename T>
struct ParamEntry {
    std::string name;
    Tensor<T> value;
    Tensor<T> grad;
    bool trainable = true;
};

// Named, ordered collection of the learnable tensors of a model. Entry
// order is the serialization and optimizer-update order, so it must be
// deterministic across runs.
template <typename T>
class ParamStore {
public:
    Tensor<T>& add(const std::string& name, Tensor<T> init, bool trainable = true) {
        if (index_.count(name)) throw Error("params: duplicate name " + name);
        index_[name] = entries_.size();
        ParamEntry<T> e;
        e.name = name;
        e.grad = Tensor<T>(init.shape);
        e.value = std::move(init);
        e.trainable = trainable;
        entries_.push_back(std::move(e));
        return entries_.back().value;
    }

    bool has(const std::string& name) const { return index_.count(name) > 0; }

    ParamEntry<T>& entry(const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end()) throw Error("params: unknown name " + name);
        return entries_[it->second];
    }
    const ParamEntry<T>& entry(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw Error("params: unknown name " + name);
        return entries_[it->second];
    }

    Tensor<T>& at(const std::string& name) { return entry(name).value; }
    const Tensor<T>& at(const std::string& name) const { return entry(name).value; }

    std::vector<ParamEntry<T>>& entries() { return entries_; }
    const std::vector<ParamEntry<T>>& entries() const { return entries_; }

    void zero_grads() {
        for (auto& e : entries_)
            std::fill(e.grad.data.begin(), e.grad.data.end(), T(0));
    }

    std::size_t total_trainable() const {
        std::size_t n = 0;
        for (const auto& e : entries_)
            if (e.trainable) n += e.value.numel();
        return n;
    }

    // Hash of all parameter bytes in entry order; cheap fingerprint for
    // determinism and leakage tests.
    std::uint64_t value_hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const auto& e : entries_) {
            h = fnv1a64(e.name.data(), e.name.size(), h);
            h = fnv1a64(e.value.data.data(), e.value.data.size() * sizeof(T), h);
        }
        return h;
    }

    template <typename U>
    ParamStore<U> cast() const {
        ParamStore<U> out;
        for (const auto& e : entries_) out.add(e.name, e.value.template cast<U>(), e.trainable);
        return out;
    }

private:
    std::vector<ParamEntry<T>> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) initialization.
template <typename T>
Tensor<T> init_uniform(std::vector<int> shape, int fan_in, Rng& rng) {
    Tensor<T> t(std::move(shape));
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (T& v : t.data) v = static_cast<T>(rng.uniform(-bound, bound));
    return t;
}

// Binds ParamStore entries into a graph and harvests leaf gradients back
// into the store after backward(). An entry may be bound more than once
// (e.g. shared weights); the gradients accumulate.
template <typename T>
class Binder {
public:
    explicit Binder(Graph<T>& g) : g_(g) {}

    Var<T> operator()(ParamEntry<T>& e) {
        Var<T> v = g_.param(e.value);
        bound_.emplace_back(v, &e);
        return v;
    }

    Var<T> operator()(ParamStore<T>& store, const std::string& name) {
        return (*this)(store.entry(name));
    }

    void harvest() {
        for (auto& [v, e] : bound_) {
            if (!v->grad_ready) continue;
            for (std::size_t i = 0; i < e->grad.data.size(); ++i)
                e->grad.data[i] += v->grad.data[i];
        }
    }

private:
    Graph<T>& g_;
    std::vector<std::pair<Var<T>, ParamEntry<T>*>> bound_;
};

}  // namespace alesal::nn
