// SPDX-License-Identifier: Apache-2.0
#include "alesal/dsp/normalize.hpp"

#include <algorithm>

namespace alesal::dsp {

NormalizedWindow normalize_pair(const std::vector<double>& amplitudes, int time, int subcarriers,
                                bool per_window) {
    if (time < 1 || subcarriers < 1)
        throw Error("normalize: empty window");
    if (amplitudes.size() != static_cast<std::size_t>(time) * subcarriers)
        throw Error("normalize: amplitude block size does not match [time x S]");

    NormalizedWindow out;
    out.time = time;
    out.subcarriers = subcarriers;
    out.values.resize(amplitudes.size());

    if (per_window) {
        const auto [mn_it, mx_it] = std::minmax_element(amplitudes.begin(), amplitudes.end());
        const double mn = *mn_it, mx = *mx_it;
        if (mx == mn) {
            out.degenerate_instants = time;
            return out;  // zeros
        }
        const double inv = 1.0 / (mx - mn);
        for (std::size_t i = 0; i < amplitudes.size(); ++i) out.values[i] = (amplitudes[i] - mn) * inv;
        return out;
    }

    for (int t = 0; t < time; ++t) {
        const double* row = amplitudes.data() + static_cast<std::size_t>(t) * subcarriers;
        double mn = row[0], mx = row[0];
        for (int s = 1; s < subcarriers; ++s) {
            mn = std::min(mn, row[s]);
            mx = std::max(mx, row[s]);
        }
        double* dst = out.values.data() + static_cast<std::size_t>(t) * subcarriers;
        if (mx == mn) {
            ++out.degenerate_instants;
            continue;  // row stays zero
        }
        const double inv = 1.0 / (mx - mn);
        for (int s = 0; s < subcarriers; ++s) dst[s] = (row[s] - mn) * inv;
    }
    return out;
}

}  // namespace alesal::dsp
