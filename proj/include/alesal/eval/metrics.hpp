// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "alesal/dsp/features.hpp"

namespace alesal::eval {

// Confusion-matrix-derived metrics for the 3-class task. weighted_f1 is the
// support-weighted mean of per-class F1 scores on a 0-100 scale; a class
// absent from the test set contributes F1 = 0 and a warning.
struct EvalReport {
    std::array<std::array<int, 3>, 3> confusion{};  // [true][predicted]
    std::array<int, 3> support{};
    std::array<double, 3> precision{};
    std::array<double, 3> recall{};
    std::array<double, 3> f1{};
    double accuracy = 0.0;      // fraction in [0, 1]
    double weighted_f1 = 0.0;   // [0, 100]
    double macro_f1 = 0.0;      // [0, 100]
    std::vector<std::string> warnings;

    std::string to_text() const;
    std::string to_csv() const;
};

// Runs `predict` over the test set and aggregates. Deterministic and
// invariant to test-set ordering.
EvalReport evaluate(const std::function<int(const dsp::WindowFeatures&)>& predict,
                    const std::vector<dsp::WindowFeatures>& test);

}  // namespace alesal::eval
