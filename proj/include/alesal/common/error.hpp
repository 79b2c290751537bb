// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace alesal {

// Base type for all recoverable pipeline errors. Message carries a
// module-qualified prefix, e.g. "csi: line 12: ...".
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

struct ShapeError : Error {
    using Error::Error;
};

struct TrainDivergence : Error {
    TrainDivergence(int epoch, const std::string& what)
        : Error("training diverged at epoch " + std::to_string(epoch) + ": " + what), epoch(epoch) {}
    int epoch;
};

}  // namespace alesal
