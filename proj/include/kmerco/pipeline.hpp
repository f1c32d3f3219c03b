#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

#include "kmerco/count_bloom_filter.hpp"
#include "kmerco/dna.hpp"
#include "kmerco/errors.hpp"

namespace kmerco {

struct InsertionStats {
    std::uint64_t total_kmers = 0;
    std::uint64_t inserted = 0;
    std::uint64_t first_occurrences = 0;
    std::uint64_t rejected_windows = 0;
    std::uint64_t overflow_events = 0;
    // Insert-loop wall time; time spent writing the distinct file is excluded.
    double elapsed_seconds = 0.0;
};

struct ClassificationStats {
    std::uint64_t distinct = 0;
    std::uint64_t trustworthy = 0;
    std::uint64_t erroneous = 0;
    std::uint64_t tau = 0;
};

// Insertion-phase failure carrying the progress made before the fault.
struct InsertionAborted : Error {
    InsertionAborted(const std::string& what, const InsertionStats& progress)
        : Error(what), partial(progress) {}

    InsertionStats partial;
};

// Phase one: slide a window over every read, pick the canonical form of each
// k-mer, record first occurrences in the distinct sink and count every k-mer
// in the filter. Every k-mer is inserted, first occurrence or not.
//
// SequenceSource must provide bool next(std::string&); KmerSink must provide
// void write(std::string_view).
template <typename SequenceSource, typename KmerSink>
InsertionStats insertion_phase(SequenceSource& reads, std::size_t k,
                               CountBloomFilter& filter, KmerSink& distinct_sink) {
    using clock = std::chrono::steady_clock;

    InsertionStats stats;
    const std::uint64_t overflow_before = filter.overflow_events();
    const auto started = clock::now();
    clock::duration writing{0};

    const auto finish = [&] {
        stats.overflow_events = filter.overflow_events() - overflow_before;
        stats.elapsed_seconds =
            std::chrono::duration<double>(clock::now() - started - writing).count();
    };

    std::string sequence;
    std::string rc;
    try {
        while (reads.next(sequence)) {
            stats.rejected_windows += for_each_kmer(sequence, k, [&](std::string_view window) {
                reverse_complement_into(window, rc);
                const CanonicalQueryResult hit = filter.query_canonical(window, rc);
                const std::string_view canonical = hit.picked_rc ? std::string_view(rc) : window;
                if (hit.frequency == 0) {
                    const auto write_start = clock::now();
                    distinct_sink.write(canonical);
                    writing += clock::now() - write_start;
                    ++stats.first_occurrences;
                }
                filter.insert(canonical);
                ++stats.inserted;
                ++stats.total_kmers;
            });
        }
    } catch (const Error& e) {
        finish();
        throw InsertionAborted(std::string("insertion phase aborted: ") + e.what(), stats);
    }
    finish();
    return stats;
}

// Phase two: query each distinct k-mer and route it by the threshold. A
// distinct k-mer that queries to zero cannot have been inserted into this
// filter, so the phase aborts instead of silently misclassifying.
//
// KmerSource must provide bool next(std::string&); the sinks must provide
// void write(std::string_view).
template <typename KmerSource, typename TrustSink, typename ErrSink>
ClassificationStats classification_phase(const CountBloomFilter& filter, KmerSource& distinct,
                                         std::uint64_t tau, TrustSink& trustworthy_sink,
                                         ErrSink& erroneous_sink) {
    if (tau == 0) throw std::invalid_argument("tau must be >= 1");

    ClassificationStats stats;
    stats.tau = tau;
    std::string kmer;
    while (distinct.next(kmer)) {
        const std::uint64_t frequency = filter.query_min(kmer);
        if (frequency == 0)
            throw IntegrityError("distinct k-mer '" + kmer +
                                 "' queries to zero; the distinct list does not belong to "
                                 "this filter");
        ++stats.distinct;
        if (frequency > tau) {
            trustworthy_sink.write(kmer);
            ++stats.trustworthy;
        } else {
            erroneous_sink.write(kmer);
            ++stats.erroneous;
        }
    }
    return stats;
}

}  // namespace kmerco
