#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace kmerco {

// MurmurHash64A (Austin Appleby, public domain).
inline std::uint64_t murmur64a(const void* key, std::size_t len, std::uint64_t seed) {
    const std::uint64_t m = 0xC6A4A7935BD1E995ULL;
    const int r = 47;

    std::uint64_t h = seed ^ (std::uint64_t(len) * m);

    const unsigned char* data = static_cast<const unsigned char*>(key);
    const unsigned char* end = data + (len / 8) * 8;

    while (data != end) {
        std::uint64_t k;
        std::memcpy(&k, data, 8);
        data += 8;

        k *= m;
        k ^= k >> r;
        k *= m;

        h ^= k;
        h *= m;
    }

    switch (len & 7) {
        case 7: h ^= std::uint64_t(data[6]) << 48; [[fallthrough]];
        case 6: h ^= std::uint64_t(data[5]) << 40; [[fallthrough]];
        case 5: h ^= std::uint64_t(data[4]) << 32; [[fallthrough]];
        case 4: h ^= std::uint64_t(data[3]) << 24; [[fallthrough]];
        case 3: h ^= std::uint64_t(data[2]) << 16; [[fallthrough]];
        case 2: h ^= std::uint64_t(data[1]) << 8; [[fallthrough]];
        case 1: h ^= std::uint64_t(data[0]); h *= m;
    }

    h ^= h >> r;
    h *= m;
    h ^= h >> r;
    return h;
}

inline std::uint64_t murmur64a(std::string_view s, std::uint64_t seed) {
    return murmur64a(s.data(), s.size(), seed);
}

// Family of hashes derived from one base seed: member a (0-based) hashes with
// seed + a + 1. Member 0 is the designated hash for canonical k-mer selection.
class HashFamily {
public:
    HashFamily(std::uint64_t seed, std::uint32_t count) : seed_(seed), count_(count) {}

    std::uint64_t operator()(std::uint32_t index, std::string_view key) const {
        return murmur64a(key, seed_ + index + 1);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint32_t size() const { return count_; }

private:
    std::uint64_t seed_;
    std::uint32_t count_;
};

// FNV-1a, the payload checksum of the filter file format.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace kmerco
