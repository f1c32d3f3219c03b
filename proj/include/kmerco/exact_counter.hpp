#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kmerco/dna.hpp"
#include "kmerco/hash.hpp"

namespace kmerco {

namespace detail {

struct TransparentStringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

}  // namespace detail

// Exact reference counts keyed by canonical k-mer: the zero-error baseline the
// probabilistic pipeline is measured against. Memory grows with the number of
// distinct k-mers.
struct ExactCounts {
    using Map = std::unordered_map<std::string, std::uint64_t, detail::TransparentStringHash,
                                   std::equal_to<>>;

    Map counts;
    std::uint64_t total = 0;
    std::uint64_t rejected_windows = 0;

    std::uint64_t frequency(std::string_view kmer) const {
        const auto it = counts.find(kmer);
        return it == counts.end() ? 0 : it->second;
    }
};

// Counts every k-mer of the stream under the same canonical selection the
// filter uses (designated hash seeded from `seed`). SequenceSource must
// provide bool next(std::string&).
template <typename SequenceSource>
ExactCounts exact_count(SequenceSource& reads, std::size_t k, std::uint64_t seed) {
    ExactCounts out;
    const HashFamily designated(seed, 1);
    std::string sequence;
    std::string rc;
    while (reads.next(sequence)) {
        out.rejected_windows += for_each_kmer(sequence, k, [&](std::string_view window) {
            reverse_complement_into(window, rc);
            const CanonicalChoice choice =
                choose_canonical(window, rc, designated(0, window), designated(0, rc));
            const auto it = out.counts.find(choice.kmer);
            if (it == out.counts.end())
                out.counts.emplace(std::string(choice.kmer), 1);
            else
                ++it->second;
            ++out.total;
        });
    }
    return out;
}

struct ExactClassification {
    std::vector<std::string> distinct;     // sorted
    std::vector<std::string> trustworthy;  // sorted, frequency > tau
    std::vector<std::string> erroneous;    // sorted, frequency <= tau
};

inline ExactClassification exact_classify(const ExactCounts& counts, std::uint64_t tau) {
    ExactClassification out;
    out.distinct.reserve(counts.counts.size());
    for (const auto& [kmer, frequency] : counts.counts) {
        out.distinct.push_back(kmer);
        (frequency > tau ? out.trustworthy : out.erroneous).push_back(kmer);
    }
    std::sort(out.distinct.begin(), out.distinct.end());
    std::sort(out.trustworthy.begin(), out.trustworthy.end());
    std::sort(out.erroneous.begin(), out.erroneous.end());
    return out;
}

// Text dump, "KMER<TAB>FREQUENCY" per line, sorted lexicographically so two
// dumps can be diffed.
inline void dump_exact_counts(const ExactCounts& counts, std::ostream& out) {
    std::vector<const ExactCounts::Map::value_type*> rows;
    rows.reserve(counts.counts.size());
    for (const auto& entry : counts.counts) rows.push_back(&entry);
    std::sort(rows.begin(), rows.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });
    for (const auto* row : rows) out << row->first << '\t' << row->second << '\n';
}

}  // namespace kmerco
