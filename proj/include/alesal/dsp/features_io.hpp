// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "alesal/dsp/features.hpp"

namespace alesal::dsp {

// Binary feature blob: shape-prefixed little-endian float32 arrays keyed by
// window id and pair, with a trailing checksum. Layout in docs/formats.md.
// Values quantize to float32 on write; the network consumes float32 either
// way, so training from a blob matches training from in-memory features.
void save_features(std::ostream& out, const std::vector<WindowFeatures>& windows);
void save_features_file(const std::string& path, const std::vector<WindowFeatures>& windows);

std::vector<WindowFeatures> load_features(std::istream& in);
std::vector<WindowFeatures> load_features_file(const std::string& path);

}  // namespace alesal::dsp
