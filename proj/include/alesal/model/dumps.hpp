// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>

#include "alesal/nn/tensor.hpp"

namespace alesal::model {

// Attention dump CSV columns (one header line, then rows per window).
inline constexpr const char* kTaCsvHeader = "window_id,pair,frame_i,frame_j,weight";
inline constexpr const char* kPaCsvHeader = "window_id,channel,weight";

void append_ta_rows(std::ostream& out, std::uint32_t window_id, int pair,
                    const nn::Tensor<float>& attention);
void append_pa_rows(std::ostream& out, std::uint32_t window_id,
                    const nn::Tensor<float>& weights);

}  // namespace alesal::model
