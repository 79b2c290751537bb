// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "alesal/nn/graph.hpp"

namespace alesal::nn {

struct GradCheckInput {
    std::string name;
    Tensor<double> value;
    bool differentiable = true;  // frozen inputs are reported as skipped
};

struct GradCheckEntry {
    std::string name;
    double max_rel_err = 0.0;
    double max_abs_err = 0.0;
    bool skipped = false;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double max_rel_err = 0.0;

    bool passed(double tol) const {
        for (const auto& e : entries)
            if (!e.skipped && e.max_rel_err > tol) return false;
        return true;
    }
    std::string summary() const;
};

// Builds a scalar loss from graph leaves (one per input, in order).
using GradCheckFn = std::function<Var<double>(Graph<double>&, const std::vector<Var<double>>&)>;

// Compares reverse-mode gradients against central finite differences
// (f(x+h) - f(x-h)) / 2h, elementwise, at float64. Relative error uses the
// symmetric form |a - n| / (|a| + |n| + 1e-6). The closure must be pure:
// identical inputs must produce identical loss.
GradCheckReport grad_check(const GradCheckFn& fn, std::vector<GradCheckInput> inputs,
                           double h = 1e-5, double tol = 1e-4);

}  // namespace alesal::nn
