#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "kmerco/dna.hpp"
#include "kmerco/errors.hpp"
#include "kmerco/filter_plan.hpp"
#include "kmerco/hash.hpp"

namespace kmerco {

enum class InsertOutcome { applied, saturated };

struct CanonicalQueryResult {
    std::uint64_t frequency = 0;
    bool picked_rc = false;
};

// Two-dimensional counting filter: an X-by-Y grid of 64-bit cells, each split
// into eta counters of alpha bits. One 64-bit hash per family member yields
// the cell row (h % X), column (h % Y) and counter slot (h % eta); the slot is
// read and written through per-slot extract/reset masks. Counters stick at
// 2^alpha - 1: an increment that would pass it is dropped so the neighbouring
// counter is never corrupted.
class CountBloomFilter {
public:
    explicit CountBloomFilter(const FilterPlan& plan)
        : plan_(plan),
          hashes_(plan.seed, plan.hash_count),
          cells_(plan.cell_count(), 0),
          extract_masks_(plan.eta),
          reset_masks_(plan.eta) {
        const std::uint64_t low = plan_.max_count();
        for (std::uint32_t l = 0; l < plan_.eta; ++l) {
            extract_masks_[l] = low << (plan_.alpha * l);
            reset_masks_[l] = ~extract_masks_[l];
        }
    }

    const FilterPlan& plan() const { return plan_; }
    std::span<const std::uint64_t> cells() const { return cells_; }
    std::uint64_t extract_mask(std::uint32_t slot) const { return extract_masks_[slot]; }
    std::uint64_t reset_mask(std::uint32_t slot) const { return reset_masks_[slot]; }

    // Number of insert calls where every counter increment was applied.
    std::uint64_t total_increments() const { return total_increments_; }
    // Number of individual counter increments dropped at the counter maximum.
    std::uint64_t overflow_events() const { return overflow_events_; }

    // `kmer` must already be the canonical representative.
    InsertOutcome insert(std::string_view kmer) {
        bool all_applied = true;
        for (std::uint32_t a = 0; a < plan_.hash_count; ++a) {
            const std::uint64_t h = hashes_(a, kmer);
            std::uint64_t& cell = cells_[cell_index(h)];
            const std::uint32_t shift = plan_.alpha * slot_of(h);
            const std::uint64_t value = (cell & extract_masks_[slot_of(h)]) >> shift;
            if (value == plan_.max_count()) {
                ++overflow_events_;
                all_applied = false;
                continue;
            }
            cell = (cell & reset_masks_[slot_of(h)]) | ((value + 1) << shift);
        }
        if (all_applied) {
            ++total_increments_;
            return InsertOutcome::applied;
        }
        return InsertOutcome::saturated;
    }

    // Minimum of the addressed counters; zero as soon as any of them is zero.
    std::uint64_t query_min(std::string_view kmer) const {
        std::uint64_t least = UINT64_MAX;
        for (std::uint32_t a = 0; a < plan_.hash_count; ++a) {
            const std::uint64_t h = hashes_(a, kmer);
            const std::uint64_t value =
                (cells_[cell_index(h)] & extract_masks_[slot_of(h)]) >> (plan_.alpha * slot_of(h));
            if (value == 0) return 0;
            if (value < least) least = value;
        }
        return least;
    }

    // Picks the canonical form of (fwd, rc) by the designated hash and queries
    // it; `rc` must be the reverse complement of `fwd`.
    CanonicalQueryResult query_canonical(std::string_view fwd, std::string_view rc) const {
        const auto choice = choose_canonical(fwd, rc, hashes_(0, fwd), hashes_(0, rc));
        return {query_min(choice.kmer), choice.picked_rc};
    }

    struct FillStats {
        std::uint64_t cells_nonzero = 0;
        std::uint64_t counters_nonzero = 0;
        std::uint64_t counters_saturated = 0;
        std::uint64_t max_value = 0;
    };

    FillStats fill_stats() const {
        FillStats stats;
        for (const std::uint64_t cell : cells_) {
            if (cell != 0) ++stats.cells_nonzero;
            for (std::uint32_t l = 0; l < plan_.eta; ++l) {
                const std::uint64_t value = (cell & extract_masks_[l]) >> (plan_.alpha * l);
                if (value == 0) continue;
                ++stats.counters_nonzero;
                if (value == plan_.max_count()) ++stats.counters_saturated;
                if (value > stats.max_value) stats.max_value = value;
            }
        }
        return stats;
    }

    void serialize(std::ostream& out) const;
    static CountBloomFilter deserialize(std::istream& in);

private:
    std::uint64_t cell_index(std::uint64_t h) const {
        return (h % plan_.x) * plan_.y + (h % plan_.y);
    }
    std::uint32_t slot_of(std::uint64_t h) const { return std::uint32_t(h % plan_.eta); }

    FilterPlan plan_;
    HashFamily hashes_;
    std::vector<std::uint64_t> cells_;
    std::vector<std::uint64_t> extract_masks_;
    std::vector<std::uint64_t> reset_masks_;
    std::uint64_t total_increments_ = 0;
    std::uint64_t overflow_events_ = 0;
};

// --- binary filter format, version 1 ----------------------------------------
//
// "KMCO", version byte, then little-endian: k_h (1), alpha (1), seed (8),
// n (8), fpp as IEEE-754 bits (8), X (8), Y (8), payload length in bytes (8),
// the X*Y cells as 64-bit words, and an FNV-1a 64 checksum of the payload.

namespace detail {

inline constexpr char kFilterMagic[4] = {'K', 'M', 'C', 'O'};
inline constexpr std::uint8_t kFilterFormatVersion = 1;

inline void put_u64_le(std::ostream& out, std::uint64_t value) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = (value >> (8 * i)) & 0xFF;
    out.write(reinterpret_cast<const char*>(buf), 8);
}

inline std::uint64_t get_u64_le(std::istream& in, const char* field) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8))
        throw FormatError(std::string("truncated filter stream while reading ") + field);
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= std::uint64_t(buf[i]) << (8 * i);
    return value;
}

inline std::uint8_t get_u8(std::istream& in, const char* field) {
    char b;
    if (!in.get(b)) throw FormatError(std::string("truncated filter stream while reading ") + field);
    return std::uint8_t(b);
}

}  // namespace detail

inline void CountBloomFilter::serialize(std::ostream& out) const {
    using namespace detail;
    out.write(kFilterMagic, 4);
    out.put(char(kFilterFormatVersion));
    out.put(char(plan_.hash_count & 0xFF));
    out.put(char(plan_.alpha & 0xFF));
    put_u64_le(out, plan_.seed);
    put_u64_le(out, plan_.n);
    std::uint64_t fpp_bits;
    std::memcpy(&fpp_bits, &plan_.fpp, 8);
    put_u64_le(out, fpp_bits);
    put_u64_le(out, plan_.x);
    put_u64_le(out, plan_.y);
    put_u64_le(out, cells_.size() * 8);

    std::vector<unsigned char> payload(cells_.size() * 8);
    for (std::size_t c = 0; c < cells_.size(); ++c)
        for (int i = 0; i < 8; ++i) payload[c * 8 + i] = (cells_[c] >> (8 * i)) & 0xFF;
    out.write(reinterpret_cast<const char*>(payload.data()),
              std::streamsize(payload.size()));
    put_u64_le(out, fnv1a64(payload.data(), payload.size()));
    if (!out) throw IoError("filter write failure");
}

inline CountBloomFilter CountBloomFilter::deserialize(std::istream& in) {
    using namespace detail;
    char magic[4];
    if (!in.read(magic, 4)) throw FormatError("truncated filter stream while reading magic");
    if (std::memcmp(magic, kFilterMagic, 4) != 0) throw FormatError("bad filter magic");
    const std::uint8_t version = get_u8(in, "version");
    if (version != kFilterFormatVersion)
        throw FormatError("unsupported filter format version " + std::to_string(version));

    const std::uint8_t hash_count = get_u8(in, "hash count");
    const std::uint8_t alpha = get_u8(in, "counter bit-length");
    const std::uint64_t seed = get_u64_le(in, "seed");
    const std::uint64_t n = get_u64_le(in, "item count");
    const std::uint64_t fpp_bits = get_u64_le(in, "fpp");
    double fpp;
    std::memcpy(&fpp, &fpp_bits, 8);
    const std::uint64_t x = get_u64_le(in, "X");
    const std::uint64_t y = get_u64_le(in, "Y");
    const std::uint64_t payload_len = get_u64_le(in, "payload length");

    FilterPlan plan;
    try {
        plan = plan_dimensions(n, fpp, alpha, hash_count, seed);
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("filter header violates plan invariants: ") + e.what());
    }
    if (plan.x != x || plan.y != y)
        throw FormatError("filter dimensions do not match the sizing of its parameters");
    if (payload_len != plan.cell_count() * 8)
        throw FormatError("payload length does not match the filter dimensions");

    std::vector<unsigned char> payload(payload_len);
    if (!in.read(reinterpret_cast<char*>(payload.data()), std::streamsize(payload_len)))
        throw FormatError("truncated filter stream while reading cells");
    const std::uint64_t stored_sum = get_u64_le(in, "checksum");
    if (stored_sum != fnv1a64(payload.data(), payload.size()))
        throw FormatError("filter payload checksum mismatch");

    CountBloomFilter filter(plan);
    for (std::size_t c = 0; c < filter.cells_.size(); ++c) {
        std::uint64_t word = 0;
        for (int i = 0; i < 8; ++i) word |= std::uint64_t(payload[c * 8 + i]) << (8 * i);
        filter.cells_[c] = word;
    }
    return filter;
}

}  // namespace kmerco
