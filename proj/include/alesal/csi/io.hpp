// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "alesal/csi/types.hpp"

namespace alesal::csi {

// Line-delimited session format:
//   CSIS v1 P=<int> S=<int> rate=<float>
//   t=<float> p=<int> <re,im> ... (S complex entries, space separated)
// Parse errors carry the 1-based line number. Records come back sorted by
// timestamp within each pair.
Session parse_session(std::istream& in);
Session parse_session_file(const std::string& path);

// Canonical form: records sorted by (timestamp, pair), shortest round-trip
// number formatting. serialize(parse(x)) == x for canonical x.
void serialize_session(const Session& session, std::ostream& out);
void serialize_session_file(const Session& session, const std::string& path);

// Label track format: one `<start> <end> <normal|apnea|plmd>` line per span.
std::vector<LabelSpan> parse_label_track(std::istream& in);
std::vector<LabelSpan> parse_label_track_file(const std::string& path);
void serialize_label_track(const std::vector<LabelSpan>& track, std::ostream& out);
void serialize_label_track_file(const std::vector<LabelSpan>& track, const std::string& path);

// Records per pair, indexed by pair id.
std::vector<int> per_pair_counts(const Session& session);

}  // namespace alesal::csi
