// SPDX-License-Identifier: Apache-2.0
#include "alesal/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "alesal/nn/hash.hpp"

namespace alesal::nn {

namespace {

constexpr char kMagic[8] = {'A', 'L', 'C', 'K', 'P', 'T', '0', '1'};
constexpr std::uint8_t kDtypeF32 = 1;
constexpr std::uint8_t kFlagTrainable = 0x01;

void put_bytes(std::string& buf, const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
}
void put_u8(std::string& buf, std::uint8_t v) { put_bytes(buf, &v, 1); }
void put_u32(std::string& buf, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    put_bytes(buf, b, 4);
}
void put_u64(std::string& buf, std::uint64_t v) {
    put_u32(buf, static_cast<std::uint32_t>(v));
    put_u32(buf, static_cast<std::uint32_t>(v >> 32));
}
void put_str(std::string& buf, const std::string& s) {
    put_u32(buf, static_cast<std::uint32_t>(s.size()));
    put_bytes(buf, s.data(), s.size());
}

struct Reader {
    std::istream& in;
    std::uint64_t hash = 0xcbf29ce484222325ULL;

    void raw(void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw Error("checkpoint: truncated file");
        hash = fnv1a64(p, n, hash);
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
    std::uint64_t u64() {
        std::uint64_t lo = u32();
        std::uint64_t hi = u32();
        return lo | (hi << 32);
    }
    std::string str() {
        std::uint32_t n = u32();
        if (n > (1u << 20)) throw Error("checkpoint: unreasonable string length");
        std::string s(n, '\0');
        if (n) raw(s.data(), n);
        return s;
    }
};

}  // namespace

void save_checkpoint(std::ostream& out, const ParamStore<float>& params,
                     const std::map<std::string, std::string>& meta) {
    std::string buf;
    put_bytes(buf, kMagic, sizeof(kMagic));
    put_u32(buf, static_cast<std::uint32_t>(meta.size()));
    for (const auto& [k, v] : meta) {
        put_str(buf, k);
        put_str(buf, v);
    }
    put_u32(buf, static_cast<std::uint32_t>(params.entries().size()));
    for (const auto& e : params.entries()) {
        put_str(buf, e.name);
        put_u8(buf, kDtypeF32);
        put_u8(buf, e.trainable ? kFlagTrainable : 0);
        put_u32(buf, static_cast<std::uint32_t>(e.value.shape.size()));
        for (int d : e.value.shape) put_u32(buf, static_cast<std::uint32_t>(d));
        put_u64(buf, static_cast<std::uint64_t>(e.value.data.size() * sizeof(float)));
        put_bytes(buf, e.value.data.data(), e.value.data.size() * sizeof(float));
    }
    const std::uint64_t checksum = fnv1a64(buf.data(), buf.size());
    put_u64(buf, checksum);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("checkpoint: write failed");
}

void save_checkpoint(const std::string& path, const ParamStore<float>& params,
                     const std::map<std::string, std::string>& meta) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("checkpoint: cannot open " + path + " for writing");
    save_checkpoint(f, params, meta);
}

Checkpoint load_checkpoint(std::istream& in) {
    Reader r{in};
    char magic[8];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw Error("checkpoint: bad magic (not a checkpoint, or unsupported version)");

    Checkpoint ck;
    const std::uint32_t n_meta = r.u32();
    for (std::uint32_t i = 0; i < n_meta; ++i) {
        std::string k = r.str();
        std::string v = r.str();
        ck.meta.emplace(std::move(k), std::move(v));
    }
    const std::uint32_t n_tensors = r.u32();
    for (std::uint32_t i = 0; i < n_tensors; ++i) {
        std::string name = r.str();
        const std::uint8_t dtype = r.u8();
        if (dtype != kDtypeF32) throw Error("checkpoint: unsupported dtype for " + name);
        const std::uint8_t flags = r.u8();
        const std::uint32_t ndim = r.u32();
        if (ndim > 8) throw Error("checkpoint: unreasonable rank for " + name);
        std::vector<int> shape(ndim);
        for (auto& d : shape) d = static_cast<int>(r.u32());
        const std::uint64_t nbytes = r.u64();
        Tensor<float> t(shape);
        if (nbytes != t.data.size() * sizeof(float))
            throw Error("checkpoint: payload size mismatch for " + name);
        if (nbytes) r.raw(t.data.data(), nbytes);
        ck.params.add(name, std::move(t), (flags & kFlagTrainable) != 0);
    }
    const std::uint64_t expected = r.hash;
    // The checksum itself is not hashed: read it raw.
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (in.gcount() != 8) throw Error("checkpoint: truncated checksum");
    std::uint64_t stored = 0;
    for (int i = 7; i >= 0; --i) stored = (stored << 8) | b[i];
    if (stored != expected) throw Error("checkpoint: checksum mismatch (corrupt file)");
    return ck;
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("checkpoint: cannot open " + path);
    return load_checkpoint(f);
}

}  // namespace alesal::nn
