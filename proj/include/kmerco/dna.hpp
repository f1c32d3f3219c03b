#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kmerco {

// The nucleotide alphabet is {A,C,G,T,N}; N stands for an unknown base, not a
// gap, and is its own complement.

inline constexpr bool is_valid_base(char b) {
    return b == 'A' || b == 'C' || b == 'G' || b == 'T' || b == 'N';
}

inline constexpr char complement_base(char b) {
    switch (b) {
        case 'A': return 'T';
        case 'T': return 'A';
        case 'C': return 'G';
        case 'G': return 'C';
        default: return 'N';
    }
}

inline void uppercase_bases(std::string& s) {
    for (char& c : s)
        if (c >= 'a' && c <= 'z') c = char(c - 'a' + 'A');
}

inline void reverse_complement_into(std::string_view kmer, std::string& out) {
    out.resize(kmer.size());
    for (std::size_t i = 0; i < kmer.size(); ++i)
        out[i] = complement_base(kmer[kmer.size() - 1 - i]);
}

inline std::string reverse_complement(std::string_view kmer) {
    std::string out;
    reverse_complement_into(kmer, out);
    return out;
}

// Visits every valid length-k window of `sequence` from left to right. The
// sequence is uppercased in place first. Windows containing a byte outside
// {A,C,G,T,N} are skipped; the number of skipped windows is returned.
template <typename Fn>
std::uint64_t for_each_kmer(std::string& sequence, std::size_t k, Fn&& fn) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    uppercase_bases(sequence);
    if (sequence.size() < k) return 0;

    // A window starting at i is clean iff the most recent invalid byte sits
    // before i.
    std::ptrdiff_t last_bad = -1;
    for (std::size_t i = 0; i + 1 < k; ++i)
        if (!is_valid_base(sequence[i])) last_bad = std::ptrdiff_t(i);

    std::uint64_t rejected = 0;
    const std::string_view view(sequence);
    const std::size_t windows = sequence.size() - k + 1;
    for (std::size_t i = 0; i < windows; ++i) {
        if (!is_valid_base(sequence[i + k - 1])) last_bad = std::ptrdiff_t(i + k - 1);
        if (last_bad >= std::ptrdiff_t(i))
            ++rejected;
        else
            fn(view.substr(i, k));
    }
    return rejected;
}

struct CanonicalChoice {
    std::string_view kmer;
    bool picked_rc = false;
};

// Representative selection between a k-mer and its reverse complement: the
// form with the smaller designated hash wins, ties keep the forward form.
inline CanonicalChoice choose_canonical(std::string_view fwd, std::string_view rc,
                                        std::uint64_t fwd_hash, std::uint64_t rc_hash) {
    if (fwd_hash <= rc_hash) return {fwd, false};
    return {rc, true};
}

}  // namespace kmerco
