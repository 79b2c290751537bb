// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "alesal/common/error.hpp"

namespace alesal::dsp {

struct NormalizedWindow {
    int time = 0;
    int subcarriers = 0;
    std::vector<double> values;  // [time x S], all in [0, 1]
    int degenerate_instants = 0;

    double at(int t, int s) const { return values[static_cast<std::size_t>(t) * subcarriers + s]; }
};

// Min-max normalization of one pair's amplitude block [time x S]. The min
// and max are taken per time instant over all subcarriers of the pair
// (per_window = false, the default) or once over the whole window
// (per_window = true). Instants where max == min map to all zeros and raise
// the degeneracy counter.
NormalizedWindow normalize_pair(const std::vector<double>& amplitudes, int time, int subcarriers,
                                bool per_window = false);

}  // namespace alesal::dsp
