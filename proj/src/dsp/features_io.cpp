// SPDX-License-Identifier: Apache-2.0
#include "alesal/dsp/features_io.hpp"

#include <cstring>
#include <fstream>

#include "alesal/common/error.hpp"
#include "alesal/nn/hash.hpp"

namespace alesal::dsp {

namespace {

constexpr char kMagic[8] = {'A', 'L', 'F', 'E', 'A', 'T', '0', '1'};
constexpr std::uint8_t kKindSeries = 0;
constexpr std::uint8_t kKindSpectrogram = 1;

void put_u8(std::string& buf, std::uint8_t v) { buf.push_back(static_cast<char>(v)); }
void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_f32(std::string& buf, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(buf, bits);
}
void put_f32_block(std::string& buf, const std::vector<double>& values) {
    for (double v : values) put_f32(buf, static_cast<float>(v));
}

struct Reader {
    std::istream& in;
    std::uint64_t hash = 0xcbf29ce484222325ULL;

    void raw(void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n) throw Error("features: truncated file");
        hash = nn::fnv1a64(p, n, hash);
    }
    std::uint8_t u8() {
        std::uint8_t v;
        raw(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        unsigned char b[4];
        raw(b, 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }
    float f32() {
        std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    std::vector<double> f32_block(std::size_t n) {
        std::vector<double> out(n);
        for (auto& v : out) v = static_cast<double>(f32());
        return out;
    }
};

}  // namespace

void save_features(std::ostream& out, const std::vector<WindowFeatures>& windows) {
    std::string buf;
    buf.append(kMagic, sizeof(kMagic));
    put_u32(buf, static_cast<std::uint32_t>(windows.size()));
    for (const auto& w : windows) {
        put_u32(buf, w.window_id);
        put_u32(buf, static_cast<std::uint32_t>(w.label));
        if (w.series.size() != w.specs.size())
            throw Error("features: window " + std::to_string(w.window_id) +
                        " has mismatched series/spectrogram counts");
        put_u32(buf, static_cast<std::uint32_t>(w.series.size()));
        for (std::size_t p = 0; p < w.series.size(); ++p) {
            const PairSeries& s = w.series[p];
            put_u8(buf, kKindSeries);
            put_u32(buf, 1);
            put_u32(buf, static_cast<std::uint32_t>(s.values.size()));
            put_f32(buf, static_cast<float>(s.rate));
            put_f32_block(buf, s.values);

            const Spectrogram& sp = w.specs[p];
            put_u8(buf, kKindSpectrogram);
            put_u32(buf, 2);
            put_u32(buf, static_cast<std::uint32_t>(sp.frames));
            put_u32(buf, static_cast<std::uint32_t>(sp.bins));
            put_f32_block(buf, sp.mag);
            put_f32_block(buf, sp.frame_times);
            put_f32_block(buf, sp.bin_freqs);
        }
    }
    const std::uint64_t checksum = nn::fnv1a64(buf.data(), buf.size());
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((checksum >> (8 * i)) & 0xFF));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("features: write failed");
}

void save_features_file(const std::string& path, const std::vector<WindowFeatures>& windows) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("features: cannot open " + path + " for writing");
    save_features(f, windows);
}

std::vector<WindowFeatures> load_features(std::istream& in) {
    Reader r{in};
    char magic[8];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw Error("features: bad magic (not a feature blob, or unsupported version)");

    std::vector<WindowFeatures> windows(r.u32());
    for (auto& w : windows) {
        w.window_id = r.u32();
        w.label = static_cast<std::int32_t>(r.u32());
        const std::uint32_t pairs = r.u32();
        if (pairs > 1024) throw Error("features: unreasonable pair count");
        for (std::uint32_t p = 0; p < pairs; ++p) {
            if (r.u8() != kKindSeries || r.u32() != 1)
                throw Error("features: expected a rank-1 series record");
            PairSeries s;
            s.pair = static_cast<int>(p);
            const std::uint32_t len = r.u32();
            s.rate = static_cast<double>(r.f32());
            s.values = r.f32_block(len);
            w.series.push_back(std::move(s));

            if (r.u8() != kKindSpectrogram || r.u32() != 2)
                throw Error("features: expected a rank-2 spectrogram record");
            Spectrogram sp;
            sp.frames = static_cast<int>(r.u32());
            sp.bins = static_cast<int>(r.u32());
            sp.mag = r.f32_block(static_cast<std::size_t>(sp.frames) * sp.bins);
            sp.frame_times = r.f32_block(static_cast<std::size_t>(sp.frames));
            sp.bin_freqs = r.f32_block(static_cast<std::size_t>(sp.bins));
            w.specs.push_back(std::move(sp));
        }
    }
    const std::uint64_t expected = r.hash;
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (in.gcount() != 8) throw Error("features: truncated checksum");
    std::uint64_t stored = 0;
    for (int i = 7; i >= 0; --i) stored = (stored << 8) | b[i];
    if (stored != expected) throw Error("features: checksum mismatch (corrupt file)");
    return windows;
}

std::vector<WindowFeatures> load_features_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("features: cannot open " + path);
    return load_features(f);
}

}  // namespace alesal::dsp
