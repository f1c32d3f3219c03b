#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "kmerco/primes.hpp"

namespace kmerco {

inline constexpr std::uint32_t kCellBits = 64;
inline constexpr std::uint32_t kMinCounterBits = 5;
inline constexpr std::uint32_t kMaxCounterBits = 16;

inline constexpr std::uint32_t counters_per_cell(std::uint32_t alpha) {
    return kCellBits / alpha;
}

inline constexpr std::uint32_t wasted_bits_per_cell(std::uint32_t alpha) {
    return kCellBits - counters_per_cell(alpha) * alpha;
}

// Filter geometry derived from the expected item count and target false
// positive probability. Starting from the classic Bloom bit count
// m = ceil(-n ln(p) / (ln 2)^2), the array is shrunk to a two-dimensional
// grid of 64-bit cells: v = sqrt(m / 128), X is the smallest prime above v
// and Y the third prime above X. Each cell holds eta counters of alpha bits.
struct FilterPlan {
    std::uint64_t n = 0;
    double fpp = 0.0;
    std::uint64_t m_bits = 0;
    double v = 0.0;
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::uint32_t alpha = 0;
    std::uint32_t eta = 0;
    std::uint32_t wasted_bits = 0;
    std::uint32_t hash_count = 0;
    std::uint64_t seed = 0;

    std::uint64_t cell_count() const { return x * y; }
    std::uint64_t size_bytes() const { return x * y * (kCellBits / 8); }
    std::uint64_t total_counters() const { return x * y * eta; }
    std::uint64_t max_count() const { return (std::uint64_t(1) << alpha) - 1; }
};

inline FilterPlan plan_dimensions(std::uint64_t n, double fpp, std::uint32_t alpha,
                                  std::uint32_t hash_count, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("expected item count must be >= 1");
    if (!(fpp > 0.0 && fpp < 1.0)) throw std::invalid_argument("fpp must lie in (0,1)");
    if (alpha < kMinCounterBits || alpha > kMaxCounterBits)
        throw std::invalid_argument("counter bit-length must lie in [5,16]");
    if (hash_count == 0) throw std::invalid_argument("hash count must be >= 1");

    FilterPlan plan;
    plan.n = n;
    plan.fpp = fpp;
    plan.alpha = alpha;
    plan.hash_count = hash_count;
    plan.seed = seed;
    const double ln2 = std::log(2.0);
    const double exact_m = -double(n) * std::log(fpp) / (ln2 * ln2);
    // Keeps the bit count and every product derived from it inside uint64.
    if (!(exact_m < 9.0e18)) throw std::invalid_argument("filter plan too large");
    plan.m_bits = std::uint64_t(std::ceil(exact_m));
    plan.v = std::sqrt(double(plan.m_bits) / 128.0);
    plan.x = next_prime_above(plan.v);
    plan.y = next_prime_after(next_prime_after(next_prime_after(plan.x)));
    plan.eta = counters_per_cell(alpha);
    plan.wasted_bits = wasted_bits_per_cell(alpha);
    return plan;
}

}  // namespace kmerco
