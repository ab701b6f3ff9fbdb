#pragma once

// Shared helpers: stable hashing, binary serialization primitives,
// a worker-partitioned parallel loop, and number formatting for tables.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace giants {

// ---------------------------------------------------------------------------
// Hashing (FNV-1a, 64-bit). Used for config hashes and cache keys; must be
// stable across runs and platforms, so std::hash is not an option.

inline uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a64(const std::string& s, uint64_t seed = 0xcbf29ce484222325ULL) {
    return fnv1a64(s.data(), s.size(), seed);
}

inline std::string hash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline uint64_t hash_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
    uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize got = in.gcount();
        if (got > 0) h = fnv1a64(buf, static_cast<size_t>(got), h);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Binary serialization primitives (little-endian, length-prefixed strings).

struct BinWriter {
    std::ostream& out;
    explicit BinWriter(std::ostream& o) : out(o) {}
    void raw(const void* p, size_t n) { out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    void u8(uint8_t v) { raw(&v, 1); }
    void u32(uint32_t v) { raw(&v, 4); }
    void u64(uint64_t v) { raw(&v, 8); }
    void i32(int32_t v) { raw(&v, 4); }
    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    void vec_u32(const std::vector<uint32_t>& v) {
        u32(static_cast<uint32_t>(v.size()));
        if (!v.empty()) raw(v.data(), v.size() * 4);
    }
};

struct BinReader {
    std::istream& in;
    explicit BinReader(std::istream& i) : in(i) {}
    void raw(void* p, size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n) throw std::runtime_error("truncated binary input");
    }
    uint8_t u8() { uint8_t v; raw(&v, 1); return v; }
    uint32_t u32() { uint32_t v; raw(&v, 4); return v; }
    uint64_t u64() { uint64_t v; raw(&v, 8); return v; }
    int32_t i32() { int32_t v; raw(&v, 4); return v; }
    std::string str() {
        uint32_t n = u32();
        std::string s(n, '\0');
        if (n) raw(s.data(), n);
        return s;
    }
    std::vector<uint32_t> vec_u32() {
        uint32_t n = u32();
        std::vector<uint32_t> v(n);
        if (n) raw(v.data(), size_t(n) * 4);
        return v;
    }
};

// ---------------------------------------------------------------------------
// parallel_for: splits [0, n) into one contiguous chunk per worker. Chunk
// boundaries depend only on (n, workers), so any per-chunk accumulation that
// is merged in chunk order is reproducible for a fixed worker count, and any
// order-insensitive accumulation is reproducible for every worker count.

template <typename Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 1 || n == 0) {
        fn(size_t{0}, n, 0);
        return;
    }
    size_t w = std::min<size_t>(static_cast<size_t>(workers), n);
    std::vector<std::thread> threads;
    threads.reserve(w);
    std::exception_ptr first_error;
    std::mutex error_mu;
    size_t chunk = (n + w - 1) / w;
    for (size_t t = 0; t < w; ++t) {
        size_t lo = t * chunk;
        size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&fn, &first_error, &error_mu, lo, hi, t]() {
            try {
                fn(lo, hi, static_cast<int>(t));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Formatting for table output. Doubles use %.10g so repeated runs emit
// byte-identical cells.

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

// Undefined-value marker used across all exported tables.
inline const char* kNA = "NA";

}  // namespace giants
