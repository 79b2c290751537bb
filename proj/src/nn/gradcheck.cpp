// SPDX-License-Identifier: Apache-2.0
#include "alesal/nn/gradcheck.hpp"

#include <cmath>
#include <sstream>

namespace alesal::nn {

namespace {

double eval_loss(const GradCheckFn& fn, const std::vector<GradCheckInput>& inputs) {
    Graph<double> g;
    std::vector<Var<double>> leaves;
    leaves.reserve(inputs.size());
    for (const auto& in : inputs) leaves.push_back(g.leaf(in.value, false, in.name.c_str()));
    Var<double> loss = fn(g, leaves);
    if (loss->val().numel() != 1) throw ShapeError("grad_check: closure must return a scalar loss");
    return loss->val().data[0];
}

}  // namespace

GradCheckReport grad_check(const GradCheckFn& fn, std::vector<GradCheckInput> inputs,
                           double h, double tol) {
    (void)tol;
    GradCheckReport report;

    // Analytic gradients from one reverse-mode pass.
    std::vector<Tensor<double>> analytic(inputs.size());
    {
        Graph<double> g;
        std::vector<Var<double>> leaves;
        leaves.reserve(inputs.size());
        for (const auto& in : inputs)
            leaves.push_back(g.leaf(in.value, in.differentiable, in.name.c_str()));
        Var<double> loss = fn(g, leaves);
        if (loss->val().numel() != 1) throw ShapeError("grad_check: closure must return a scalar loss");
        g.backward(loss);
        for (std::size_t i = 0; i < inputs.size(); ++i)
            analytic[i] = leaves[i]->grad_ready ? leaves[i]->grad : Tensor<double>(inputs[i].value.shape);
    }

    for (std::size_t i = 0; i < inputs.size(); ++i) {
        GradCheckEntry entry;
        entry.name = inputs[i].name;
        if (!inputs[i].differentiable) {
            entry.skipped = true;
            report.entries.push_back(entry);
            continue;
        }
        for (std::size_t j = 0; j < inputs[i].value.data.size(); ++j) {
            const double orig = inputs[i].value.data[j];
            inputs[i].value.data[j] = orig + h;
            const double fp = eval_loss(fn, inputs);
            inputs[i].value.data[j] = orig - h;
            const double fm = eval_loss(fn, inputs);
            inputs[i].value.data[j] = orig;

            const double numeric = (fp - fm) / (2.0 * h);
            const double a = analytic[i].data[j];
            const double abs_err = std::fabs(a - numeric);
            const double rel_err = abs_err / (std::fabs(a) + std::fabs(numeric) + 1e-6);
            entry.max_abs_err = std::max(entry.max_abs_err, abs_err);
            entry.max_rel_err = std::max(entry.max_rel_err, rel_err);
        }
        report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
        report.entries.push_back(entry);
    }
    return report;
}

std::string GradCheckReport::summary() const {
    std::ostringstream os;
    for (const auto& e : entries) {
        if (e.skipped)
            os << e.name << ": skipped (frozen)\n";
        else
            os << e.name << ": max rel err " << e.max_rel_err << ", max abs err " << e.max_abs_err
               << "\n";
    }
    return os.str();
}

}  // namespace alesal::nn
