// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "alesal/nn/params.hpp"

namespace alesal::nn {

// Versioned binary checkpoint: a manifest of (name, shape, dtype, raw
// bytes) tensor entries plus string metadata, closed by an FNV-1a64
// checksum. Layout is documented in docs/formats.md and must stay
// byte-stable: identical params + meta always serialize identically.
struct Checkpoint {
    ParamStore<float> params;
    std::map<std::string, std::string> meta;  // ordered, for deterministic bytes
};

void save_checkpoint(std::ostream& out, const ParamStore<float>& params,
                     const std::map<std::string, std::string>& meta);
void save_checkpoint(const std::string& path, const ParamStore<float>& params,
                     const std::map<std::string, std::string>& meta);

Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace alesal::nn
