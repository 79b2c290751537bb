// SPDX-License-Identifier: Apache-2.0
//
// Session text format, label tracks, and windowing.

#include <doctest.h>

#include <sstream>

#include "alesal/csi/io.hpp"
#include "alesal/csi/windowize.hpp"
#include "alesal/nn/rng.hpp"

using namespace alesal;
using csi::CsiRecord;
using csi::Session;
using csi::SessionMeta;
using csi::UniformSeries;
using nn::Rng;

namespace {

Session random_session(Rng& rng) {
    Session s;
    s.meta.pairs = rng.uniform_int(1, 3);
    s.meta.subcarriers = rng.uniform_int(1, 4);
    s.meta.nominal_rate = rng.uniform(1.0, 20.0);
    const int n = rng.uniform_int(2, 12);
    double t = rng.uniform(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        CsiRecord r;
        r.timestamp = t;
        t += rng.uniform(0.05, 0.5);
        r.pair = rng.uniform_int(0, s.meta.pairs - 1);
        for (int k = 0; k < s.meta.subcarriers; ++k)
            r.values.emplace_back(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        s.records.push_back(std::move(r));
    }
    return s;
}

// Uniform constant-valued streams for windowize tests.
std::vector<UniformSeries> constant_streams(const SessionMeta& meta, double rate, int samples) {
    std::vector<UniformSeries> out;
    for (int p = 0; p < meta.pairs; ++p) {
        UniformSeries u;
        u.pair = p;
        u.subcarriers = meta.subcarriers;
        u.rate = rate;
        u.samples = samples;
        u.values.assign(static_cast<std::size_t>(samples) * meta.subcarriers, {1.0, 0.0});
        out.push_back(std::move(u));
    }
    return out;
}

}  // namespace

TEST_CASE("parse: well-formed two-record file") {
    std::istringstream in(
        "CSIS v1 P=2 S=3 rate=10\n"
        "t=0.1 p=0 1,2 3,4 5,6\n"
        "t=0.2 p=1 -1,0 0.5,-0.25 2,2\n");
    Session s = csi::parse_session(in);
    CHECK(s.meta.pairs == 2);
    CHECK(s.meta.subcarriers == 3);
    CHECK(s.meta.nominal_rate == 10.0);
    REQUIRE(s.records.size() == 2);
    CHECK(s.records[0].timestamp == 0.1);
    CHECK(s.records[0].pair == 0);
    CHECK(s.records[0].values[1] == std::complex<double>(3.0, 4.0));
    CHECK(s.records[1].pair == 1);
    CHECK(s.records[1].values[2] == std::complex<double>(2.0, 2.0));
    CHECK(csi::per_pair_counts(s) == std::vector<int>{1, 1});
}

TEST_CASE("parse: record with S-1 values is a format error with line number") {
    std::istringstream in(
        "CSIS v1 P=1 S=3 rate=10\n"
        "t=0.1 p=0 1,2 3,4\n");
    CHECK_THROWS_WITH_AS(csi::parse_session(in), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("parse: malformed tokens carry the line number") {
    std::istringstream in(
        "CSIS v1 P=1 S=1 rate=10\n"
        "t=0.1 p=0 1,2\n"
        "t=abc p=0 1,2\n");
    CHECK_THROWS_WITH_AS(csi::parse_session(in), doctest::Contains("line 3"), ParseError);
}

TEST_CASE("parse: pair out of range rejected") {
    std::istringstream in(
        "CSIS v1 P=2 S=1 rate=10\n"
        "t=0.1 p=2 1,2\n");
    CHECK_THROWS_AS(csi::parse_session(in), ParseError);
}

TEST_CASE("roundtrip: serialize(parse(x)) == x on canonical form, random sessions") {
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        Session s = random_session(rng);
        std::ostringstream first;
        csi::serialize_session(s, first);

        std::istringstream back(first.str());
        Session reparsed = csi::parse_session(back);
        std::ostringstream second;
        csi::serialize_session(reparsed, second);
        CHECK(first.str() == second.str());
    }
}

TEST_CASE("label track: roundtrip and validation") {
    std::istringstream in("0 12.5 normal\n12.5 20 apnea\n20 26 plmd\n");
    auto track = csi::parse_label_track(in);
    REQUIRE(track.size() == 3);
    CHECK(track[1].class_id == csi::kClassApnea);
    std::ostringstream out;
    csi::serialize_label_track(track, out);
    CHECK(out.str() == "0 12.5 normal\n12.5 20 apnea\n20 26 plmd\n");

    std::istringstream overlapping("0 10 normal\n5 15 apnea\n");
    CHECK_THROWS_AS(csi::parse_label_track(overlapping), Error);
}

TEST_CASE("windowize: 60 s at 10 Hz, Z=20, hop=20 gives 3 windows") {
    SessionMeta meta;
    meta.pairs = 2;
    meta.subcarriers = 3;
    meta.nominal_rate = 10.0;
    meta.label_track = {{0.0, 60.0, csi::kClassNormal}};
    auto windows = csi::windowize(constant_streams(meta, 10.0, 600), meta, 20.0, 20.0);
    CHECK(windows.size() == 3);
    for (const auto& w : windows) {
        CHECK(w.time_steps == 200);
        CHECK(w.pairs == 2);
        CHECK(w.subcarriers == 3);
        CHECK(w.label == csi::kClassNormal);
    }
}

TEST_CASE("windowize: hop=10 gives 5 windows") {
    SessionMeta meta;
    meta.pairs = 1;
    meta.subcarriers = 1;
    meta.nominal_rate = 10.0;
    meta.label_track = {{0.0, 60.0, csi::kClassNormal}};
    auto windows = csi::windowize(constant_streams(meta, 10.0, 600), meta, 20.0, 10.0);
    CHECK(windows.size() == 5);
}

TEST_CASE("windowize: majority span labeling, 12 s apnea + 8 s normal -> apnea") {
    SessionMeta meta;
    meta.pairs = 1;
    meta.subcarriers = 1;
    meta.nominal_rate = 10.0;
    meta.label_track = {{0.0, 12.0, csi::kClassApnea}, {12.0, 20.0, csi::kClassNormal}};
    auto windows = csi::windowize(constant_streams(meta, 10.0, 200), meta, 20.0, 20.0);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].label == csi::kClassApnea);
}

TEST_CASE("windowize: exact coverage tie resolves toward the severe class") {
    SessionMeta meta;
    meta.pairs = 1;
    meta.subcarriers = 1;
    meta.nominal_rate = 10.0;
    meta.label_track = {{0.0, 10.0, csi::kClassNormal}, {10.0, 20.0, csi::kClassPlmd}};
    auto windows = csi::windowize(constant_streams(meta, 10.0, 200), meta, 20.0, 20.0);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].label == csi::kClassPlmd);
}

TEST_CASE("windowize: windows without label coverage are dropped") {
    SessionMeta meta;
    meta.pairs = 1;
    meta.subcarriers = 1;
    meta.nominal_rate = 10.0;
    meta.label_track = {{0.0, 20.0, csi::kClassNormal}};  // covers only the first window
    auto windows = csi::windowize(constant_streams(meta, 10.0, 400), meta, 20.0, 20.0);
    CHECK(windows.size() == 1);
}

TEST_CASE("windowize: stream shorter than one window yields empty result") {
    SessionMeta meta;
    meta.pairs = 1;
    meta.subcarriers = 1;
    meta.nominal_rate = 10.0;
    meta.label_track = {{0.0, 20.0, csi::kClassNormal}};
    auto windows = csi::windowize(constant_streams(meta, 10.0, 150), meta, 20.0, 20.0);
    CHECK(windows.empty());
}

TEST_CASE("windowize: dense [Z*f_r x P x S] shape over random configurations") {
    Rng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        SessionMeta meta;
        meta.pairs = rng.uniform_int(1, 4);
        meta.subcarriers = rng.uniform_int(1, 6);
        meta.nominal_rate = 10.0;
        const double z = rng.uniform_int(1, 4) * 2.0;
        const int samples = rng.uniform_int(40, 120);
        meta.label_track = {{0.0, samples / 10.0, csi::kClassApnea}};
        auto windows = csi::windowize(constant_streams(meta, 10.0, samples), meta, z, z);
        for (const auto& w : windows) {
            CHECK(w.time_steps == static_cast<int>(z * 10));
            CHECK(static_cast<int>(w.samples.size()) == w.time_steps * meta.pairs * meta.subcarriers);
        }
    }
}
