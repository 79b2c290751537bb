// SPDX-License-Identifier: Apache-2.0
#include "alesal/csi/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "alesal/common/num_format.hpp"

namespace alesal::csi {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view expect_prefix(std::string_view token, std::string_view prefix, std::size_t line) {
    if (token.substr(0, prefix.size()) != prefix)
        throw ParseError(line, "expected '" + std::string(prefix) + "...', got '" + std::string(token) + "'");
    return token.substr(prefix.size());
}

// Reruns a parsing step so that low-level number errors carry the line.
template <typename Fn>
auto at_line(std::size_t line, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
}

}  // namespace

const char* class_name(int class_id) {
    switch (class_id) {
        case kClassNormal: return "normal";
        case kClassApnea: return "apnea";
        case kClassPlmd: return "plmd";
        default: throw Error("csi: unknown class id " + std::to_string(class_id));
    }
}

int class_id_from_name(const std::string& name) {
    if (name == "normal") return kClassNormal;
    if (name == "apnea") return kClassApnea;
    if (name == "plmd") return kClassPlmd;
    throw Error("csi: unknown class name '" + name + "'");
}

void validate_meta(const SessionMeta& meta) {
    if (meta.pairs <= 0 || meta.subcarriers <= 0)
        throw Error("csi: meta must have positive pair and subcarrier counts");
    if (!(meta.nominal_rate > 0) || !std::isfinite(meta.nominal_rate))
        throw Error("csi: meta rate must be positive and finite");
    double prev_end = -1.0;
    for (const auto& span : meta.label_track) {
        class_name(span.class_id);  // validates the id
        if (!(span.start < span.end))
            throw Error("csi: label span must have start < end");
        if (span.start < prev_end)
            throw Error("csi: label spans must be sorted and non-overlapping");
        prev_end = span.end;
    }
}

Session parse_session(std::istream& in) {
    Session session;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError(1, "empty input, missing CSIS header");
    ++lineno;
    at_line(lineno, [&] {
        auto tokens = split_ws(line);
        if (tokens.size() != 5 || tokens[0] != "CSIS" || tokens[1] != "v1")
            throw ParseError(lineno, "expected header 'CSIS v1 P=<int> S=<int> rate=<float>'");
        session.meta.pairs = static_cast<int>(parse_long(expect_prefix(tokens[2], "P=", lineno), "P"));
        session.meta.subcarriers =
            static_cast<int>(parse_long(expect_prefix(tokens[3], "S=", lineno), "S"));
        session.meta.nominal_rate = parse_double(expect_prefix(tokens[4], "rate=", lineno), "rate");
        if (session.meta.pairs <= 0 || session.meta.subcarriers <= 0 ||
            !(session.meta.nominal_rate > 0))
            throw ParseError(lineno, "header P, S and rate must be positive");
    });

    const int S = session.meta.subcarriers;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        at_line(lineno, [&] {
        auto tokens = split_ws(line);
        if (tokens.size() != static_cast<std::size_t>(S) + 2)
            throw ParseError(lineno, "record has " + std::to_string(tokens.size() - 2) +
                                         " complex values, header says S=" + std::to_string(S));
        CsiRecord rec;
        rec.timestamp = parse_double(expect_prefix(tokens[0], "t=", lineno), "t");
        rec.pair = static_cast<int>(parse_long(expect_prefix(tokens[1], "p=", lineno), "p"));
        if (!std::isfinite(rec.timestamp) || rec.timestamp < 0)
            throw ParseError(lineno, "timestamp must be finite and non-negative");
        if (rec.pair < 0 || rec.pair >= session.meta.pairs)
            throw ParseError(lineno, "pair index " + std::to_string(rec.pair) +
                                         " out of range [0," + std::to_string(session.meta.pairs) + ")");
        rec.values.reserve(static_cast<std::size_t>(S));
        for (int s = 0; s < S; ++s) {
            std::string_view tok = tokens[static_cast<std::size_t>(s) + 2];
            const std::size_t comma = tok.find(',');
            if (comma == std::string_view::npos)
                throw ParseError(lineno, "complex value must be 're,im', got '" + std::string(tok) + "'");
            const double re = parse_double(tok.substr(0, comma), "re");
            const double im = parse_double(tok.substr(comma + 1), "im");
            if (!std::isfinite(re) || !std::isfinite(im))
                throw ParseError(lineno, "non-finite CSI value");
            rec.values.emplace_back(re, im);
        }
        session.records.push_back(std::move(rec));
        });
    }

    std::stable_sort(session.records.begin(), session.records.end(),
                     [](const CsiRecord& a, const CsiRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.pair < b.pair;
                     });
    return session;
}

Session parse_session_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("csi: cannot open " + path);
    try {
        return parse_session(f);
    } catch (const ParseError& e) {
        throw ParseError(e.line_number, path + ": " + e.what());
    }
}

void serialize_session(const Session& session, std::ostream& out) {
    validate_meta(session.meta);
    out << "CSIS v1 P=" << session.meta.pairs << " S=" << session.meta.subcarriers
        << " rate=" << format_double(session.meta.nominal_rate) << "\n";

    std::vector<const CsiRecord*> sorted;
    sorted.reserve(session.records.size());
    for (const auto& r : session.records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](const CsiRecord* a, const CsiRecord* b) {
        if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
        return a->pair < b->pair;
    });

    std::string buf;
    for (const CsiRecord* r : sorted) {
        if (static_cast<int>(r->values.size()) != session.meta.subcarriers)
            throw Error("csi: record has " + std::to_string(r->values.size()) +
                        " values, meta says S=" + std::to_string(session.meta.subcarriers));
        buf.clear();
        buf += "t=";
        buf += format_double(r->timestamp);
        buf += " p=";
        buf += std::to_string(r->pair);
        for (const auto& v : r->values) {
            buf += ' ';
            buf += format_double(v.real());
            buf += ',';
            buf += format_double(v.imag());
        }
        buf += '\n';
        out << buf;
    }
}

void serialize_session_file(const Session& session, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error("csi: cannot open " + path + " for writing");
    serialize_session(session, f);
    if (!f) throw Error("csi: write failed for " + path);
}

std::vector<LabelSpan> parse_label_track(std::istream& in) {
    std::vector<LabelSpan> track;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        at_line(lineno, [&] {
            auto tokens = split_ws(line);
            if (tokens.size() != 3)
                throw ParseError(lineno, "expected '<start> <end> <normal|apnea|plmd>'");
            LabelSpan span;
            span.start = parse_double(tokens[0], "start");
            span.end = parse_double(tokens[1], "end");
            span.class_id = class_id_from_name(std::string(tokens[2]));
            if (!(span.start < span.end)) throw ParseError(lineno, "label span must have start < end");
            track.push_back(span);
        });
    }
    double prev_end = -1.0;
    for (const auto& span : track) {
        if (span.start < prev_end)
            throw Error("csi: label spans must be sorted and non-overlapping");
        prev_end = span.end;
    }
    return track;
}

std::vector<LabelSpan> parse_label_track_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("csi: cannot open " + path);
    return parse_label_track(f);
}

void serialize_label_track(const std::vector<LabelSpan>& track, std::ostream& out) {
    for (const auto& span : track)
        out << format_double(span.start) << ' ' << format_double(span.end) << ' '
            << class_name(span.class_id) << "\n";
}

void serialize_label_track_file(const std::vector<LabelSpan>& track, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error("csi: cannot open " + path + " for writing");
    serialize_label_track(track, f);
}

std::vector<int> per_pair_counts(const Session& session) {
    std::vector<int> counts(static_cast<std::size_t>(session.meta.pairs), 0);
    for (const auto& r : session.records)
        if (r.pair >= 0 && r.pair < session.meta.pairs) ++counts[static_cast<std::size_t>(r.pair)];
    return counts;
}

}  // namespace alesal::csi
