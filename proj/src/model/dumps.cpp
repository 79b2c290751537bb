// SPDX-License-Identifier: Apache-2.0
#include "alesal/model/dumps.hpp"

#include <ostream>

#include "alesal/common/num_format.hpp"

namespace alesal::model {

void append_ta_rows(std::ostream& out, std::uint32_t window_id, int pair,
                    const nn::Tensor<float>& attention) {
    for (int i = 0; i < attention.rows(); ++i)
        for (int j = 0; j < attention.cols(); ++j)
            out << window_id << ',' << pair << ',' << i << ',' << j << ','
                << format_double(static_cast<double>(attention(i, j))) << '\n';
}

void append_pa_rows(std::ostream& out, std::uint32_t window_id,
                    const nn::Tensor<float>& weights) {
    for (std::size_t c = 0; c < weights.numel(); ++c)
        out << window_id << ',' << (c + 1) << ','
            << format_double(static_cast<double>(weights.data[c])) << '\n';
}

}  // namespace alesal::model
