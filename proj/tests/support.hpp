#pragma once

// Shared fixtures for the test suite: in-memory sources/sinks matching the
// pipeline concepts, plus generators for random sequences. The primality
// check here is an oracle deliberately written independently of the library.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace testsupport {

struct VectorSequenceSource {
    explicit VectorSequenceSource(std::vector<std::string> reads)
        : reads_(std::move(reads)) {}

    bool next(std::string& sequence) {
        if (index_ >= reads_.size()) return false;
        sequence = reads_[index_++];
        return true;
    }

    void rewind() { index_ = 0; }

    std::vector<std::string> reads_;
    std::size_t index_ = 0;
};

struct VectorKmerSink {
    void write(std::string_view kmer) { kmers.emplace_back(kmer); }

    std::vector<std::string> kmers;
};

struct VectorKmerSource {
    explicit VectorKmerSource(std::vector<std::string> kmers) : kmers_(std::move(kmers)) {}

    bool next(std::string& kmer) {
        if (index_ >= kmers_.size()) return false;
        kmer = kmers_[index_++];
        return true;
    }

    std::vector<std::string> kmers_;
    std::size_t index_ = 0;
};

inline std::string random_bases(std::mt19937_64& rng, std::size_t length,
                                bool allow_n = false) {
    static constexpr char acgt[] = {'A', 'C', 'G', 'T'};
    std::string out(length, 'A');
    if (allow_n) {
        std::uniform_int_distribution<int> pick(0, 4);
        for (char& c : out) {
            const int b = pick(rng);
            c = b == 4 ? 'N' : acgt[b];
        }
    } else {
        std::uniform_int_distribution<int> pick(0, 3);
        for (char& c : out) c = acgt[pick(rng)];
    }
    return out;
}

// Plain trial division, kept separate from the library's prime search on
// purpose: the sizing tests must not validate the code with itself.
inline bool naive_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace testsupport
