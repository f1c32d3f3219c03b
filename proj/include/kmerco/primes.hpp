#pragma once

#include <cmath>
#include <cstdint>

namespace kmerco {

// Trial division; the dimensions this feeds stay far below 10^9.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline std::uint64_t next_prime_after(std::uint64_t n) {
    std::uint64_t c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

// Smallest prime strictly greater than the real value v.
inline std::uint64_t next_prime_above(double v) {
    std::uint64_t c = v < 1.0 ? 2 : std::uint64_t(std::floor(v)) + 1;
    if (c < 2) c = 2;
    while (!is_prime(c)) ++c;
    return c;
}

}  // namespace kmerco
