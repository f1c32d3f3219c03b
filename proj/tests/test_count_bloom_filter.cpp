#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "kmerco/count_bloom_filter.hpp"
#include "support.hpp"

using namespace kmerco;
using testsupport::random_bases;

namespace {

CountBloomFilter make_filter(std::uint64_t n, std::uint32_t alpha = 8,
                             std::uint32_t hashes = 2, std::uint64_t seed = 42,
                             double fpp = 0.001) {
    return CountBloomFilter(plan_dimensions(n, fpp, alpha, hashes, seed));
}

std::string serialize_to_string(const CountBloomFilter& filter) {
    std::ostringstream out(std::ios::binary);
    filter.serialize(out);
    return out.str();
}

CountBloomFilter deserialize_from_string(const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return CountBloomFilter::deserialize(in);
}

}  // namespace

TEST_CASE("extract and reset masks isolate one counter") {
    for (std::uint32_t alpha = 5; alpha <= 16; ++alpha) {
        CAPTURE(alpha);
        const CountBloomFilter filter = make_filter(100, alpha);
        const std::uint32_t eta = filter.plan().eta;
        REQUIRE(eta == 64 / alpha);
        for (std::uint32_t l = 0; l < eta; ++l) {
            const std::uint64_t extract = filter.extract_mask(l);
            const std::uint64_t reset = filter.reset_mask(l);
            CHECK(std::popcount(extract) == int(alpha));
            CHECK(extract >> (alpha * l) == (std::uint64_t(1) << alpha) - 1);
            CHECK(reset == ~extract);
            CHECK((extract & reset) == 0);
        }
    }
}

TEST_CASE("mask algebra reassembles any cell") {
    std::mt19937_64 rng(99);
    const CountBloomFilter filter = make_filter(100, 5);
    for (int round = 0; round < 100; ++round) {
        const std::uint64_t cell = rng();
        std::uint64_t reassembled = 0;
        for (std::uint32_t l = 0; l < filter.plan().eta; ++l) {
            CHECK(((cell & filter.extract_mask(l)) | (cell & filter.reset_mask(l))) == cell);
            reassembled |= cell & filter.extract_mask(l);
        }
        // The extract masks cover everything except the wasted top bits.
        const std::uint32_t used = filter.plan().eta * filter.plan().alpha;
        const std::uint64_t used_mask =
            used == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << used) - 1;
        CHECK(reassembled == (cell & used_mask));
    }
}

TEST_CASE("the 8-bit first-counter masks") {
    const CountBloomFilter filter = make_filter(10, 8);
    CHECK(filter.extract_mask(0) == 0x00000000000000FFULL);
    CHECK(filter.reset_mask(0) == 0xFFFFFFFFFFFFFF00ULL);
}

TEST_CASE("fresh filter answers zero") {
    const CountBloomFilter filter = make_filter(10);
    CHECK(filter.query_min("ACGTACG") == 0);
    const auto hit = filter.query_canonical("ACGTACG", reverse_complement("ACGTACG"));
    CHECK(hit.frequency == 0);
}

TEST_CASE("single insert is visible through both queries") {
    CountBloomFilter filter = make_filter(10);
    const std::string kmer = "ACGTACG";
    const std::string rc = reverse_complement(kmer);
    const auto canonical = filter.query_canonical(kmer, rc);
    const std::string form = canonical.picked_rc ? rc : kmer;

    CHECK(filter.insert(form) == InsertOutcome::applied);
    CHECK(filter.query_min(form) == 1);
    CHECK(filter.query_canonical(kmer, rc).frequency == 1);
    CHECK(filter.total_increments() == 1);
    CHECK(filter.overflow_events() == 0);
}

TEST_CASE("query through either strand sees the same count") {
    CountBloomFilter filter = make_filter(100);
    const std::string kmer = "GGCTCTATCCA";
    const std::string rc = reverse_complement(kmer);
    const auto choice = filter.query_canonical(kmer, rc);
    const std::string canonical = choice.picked_rc ? rc : kmer;

    for (int i = 0; i < 3; ++i) filter.insert(canonical);

    const auto via_fwd = filter.query_canonical(kmer, rc);
    const auto via_rc = filter.query_canonical(rc, kmer);
    CHECK(via_fwd.frequency == 3);
    CHECK(via_rc.frequency == 3);
}

TEST_CASE("counters saturate at the alpha maximum and stay put") {
    CountBloomFilter filter = make_filter(50, 5);
    REQUIRE(filter.plan().max_count() == 31);

    // This k-mer's two hash slots must be distinct counters, otherwise each
    // insert would bump the same counter twice.
    const std::string kmer = "ACGTACGTACGTACGTACGTA";
    const HashFamily family(filter.plan().seed, filter.plan().hash_count);
    const auto& plan = filter.plan();
    const std::uint64_t h0 = family(0, kmer);
    const std::uint64_t h1 = family(1, kmer);
    REQUIRE((h0 % plan.x != h1 % plan.x || h0 % plan.y != h1 % plan.y ||
             h0 % plan.eta != h1 % plan.eta));

    for (int i = 0; i < 31; ++i) CHECK(filter.insert(kmer) == InsertOutcome::applied);
    CHECK(filter.query_min(kmer) == 31);
    CHECK(filter.overflow_events() == 0);

    for (int i = 0; i < 5; ++i) CHECK(filter.insert(kmer) == InsertOutcome::saturated);
    CHECK(filter.query_min(kmer) == 31);
    CHECK(filter.overflow_events() == 5 * plan.hash_count);
    CHECK(filter.total_increments() == 31);
}

TEST_CASE("no counter escapes past the maximum under an insert storm") {
    std::mt19937_64 rng(616);
    // A filter planned for far fewer items than it receives, so counters
    // collide and saturate constantly.
    CountBloomFilter filter = make_filter(20, 5, 3);
    for (int i = 0; i < 50000; ++i) filter.insert(random_bases(rng, 9));

    CHECK(filter.overflow_events() > 0);
    const auto fill = filter.fill_stats();
    CHECK(fill.max_value <= filter.plan().max_count());
    CHECK(fill.counters_saturated > 0);

    // Exhaustive scan: no cell carries bits outside the counter area.
    const std::uint32_t used = filter.plan().eta * filter.plan().alpha;
    for (const std::uint64_t cell : filter.cells())
        if (used < 64) CHECK(cell >> used == 0);
}

TEST_CASE("counting never under-reports") {
    std::mt19937_64 rng(4242);
    std::set<std::string> pool;
    while (pool.size() < 1000) pool.insert(random_bases(rng, 21));

    std::vector<std::string> inserts;
    std::map<std::string, std::uint64_t> truth;
    for (const std::string& kmer : pool) {
        const std::uint64_t copies = std::uniform_int_distribution<std::uint64_t>(1, 5)(rng);
        truth[kmer] = copies;
        for (std::uint64_t i = 0; i < copies; ++i) inserts.push_back(kmer);
    }
    std::shuffle(inserts.begin(), inserts.end(), rng);

    CountBloomFilter filter = make_filter(inserts.size());
    for (const std::string& kmer : inserts) filter.insert(kmer);

    REQUIRE(filter.overflow_events() == 0);
    for (const auto& [kmer, count] : truth) CHECK(filter.query_min(kmer) >= count);
}

TEST_CASE("queries are monotone in the insert stream") {
    std::mt19937_64 rng(555);
    std::vector<std::string> probes;
    for (int i = 0; i < 50; ++i) probes.push_back(random_bases(rng, 15));

    CountBloomFilter filter = make_filter(5000);
    std::vector<std::uint64_t> last(probes.size(), 0);
    for (int batch = 0; batch < 20; ++batch) {
        for (int i = 0; i < 200; ++i) filter.insert(random_bases(rng, 15));
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const std::uint64_t now = filter.query_min(probes[p]);
            CHECK(now >= last[p]);
            last[p] = now;
        }
    }
}

TEST_CASE("identical seed and insert sequence give bit-identical cells") {
    std::mt19937_64 rng(77);
    std::vector<std::string> kmers;
    for (int i = 0; i < 2000; ++i) kmers.push_back(random_bases(rng, 17));

    CountBloomFilter a = make_filter(kmers.size(), 8, 2, 1234);
    CountBloomFilter b = make_filter(kmers.size(), 8, 2, 1234);
    for (const auto& kmer : kmers) {
        a.insert(kmer);
        b.insert(kmer);
    }
    CHECK(std::equal(a.cells().begin(), a.cells().end(), b.cells().begin()));

    CountBloomFilter c = make_filter(kmers.size(), 8, 2, 4321);
    for (const auto& kmer : kmers) c.insert(kmer);
    CHECK_FALSE(std::equal(a.cells().begin(), a.cells().end(), c.cells().begin()));
}

TEST_CASE("concurrent readers observe the single-threaded answers") {
    std::mt19937_64 rng(31337);
    std::vector<std::string> kmers;
    for (int i = 0; i < 3000; ++i) kmers.push_back(random_bases(rng, 19));

    CountBloomFilter filter = make_filter(kmers.size());
    for (const auto& kmer : kmers) filter.insert(kmer);

    std::vector<std::uint64_t> expected;
    expected.reserve(kmers.size());
    for (const auto& kmer : kmers) expected.push_back(filter.query_min(kmer));

    std::vector<std::thread> workers;
    std::vector<int> mismatches(4, 0);
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = t; i < kmers.size(); i += 4)
                if (filter.query_min(kmers[i]) != expected[i]) ++mismatches[t];
        });
    }
    for (auto& w : workers) w.join();
    CHECK(mismatches == std::vector<int>(4, 0));
}

TEST_CASE("serialization round-trips bit for bit") {
    SECTION("empty filter") {
        const CountBloomFilter filter = make_filter(100, 8, 2, 42);
        const std::string bytes = serialize_to_string(filter);
        const CountBloomFilter restored = deserialize_from_string(bytes);
        CHECK(std::equal(filter.cells().begin(), filter.cells().end(),
                         restored.cells().begin()));
        CHECK(serialize_to_string(restored) == bytes);
    }

    SECTION("filter with ten thousand inserts") {
        std::mt19937_64 rng(9001);
        CountBloomFilter filter = make_filter(10000, 7, 3, 7);
        std::vector<std::string> probes;
        for (int i = 0; i < 10000; ++i) {
            const std::string kmer = random_bases(rng, 23);
            filter.insert(kmer);
            if (probes.size() < 100) probes.push_back(kmer);
        }

        const std::string bytes = serialize_to_string(filter);
        const CountBloomFilter restored = deserialize_from_string(bytes);

        CHECK(restored.plan().n == filter.plan().n);
        CHECK(restored.plan().fpp == filter.plan().fpp);
        CHECK(restored.plan().x == filter.plan().x);
        CHECK(restored.plan().y == filter.plan().y);
        CHECK(restored.plan().alpha == filter.plan().alpha);
        CHECK(restored.plan().hash_count == filter.plan().hash_count);
        CHECK(restored.plan().seed == filter.plan().seed);
        CHECK(std::equal(filter.cells().begin(), filter.cells().end(),
                         restored.cells().begin()));
        for (const auto& probe : probes)
            CHECK(restored.query_min(probe) == filter.query_min(probe));
        CHECK(serialize_to_string(restored) == bytes);
    }
}

TEST_CASE("the serialized header layout is pinned") {
    const CountBloomFilter filter = make_filter(1, 8, 2, 0x1122334455667788ULL, 0.5);
    const std::string bytes = serialize_to_string(filter);

    REQUIRE(bytes.size() == 4 + 1 + 1 + 1 + 8 * 6 + filter.plan().cell_count() * 8 + 8);
    CHECK(bytes.substr(0, 4) == "KMCO");
    CHECK(bytes[4] == 1);  // format version
    CHECK(bytes[5] == 2);  // hash count
    CHECK(bytes[6] == 8);  // alpha
    // Seed, little-endian.
    const std::string seed_le = {"\x88\x77\x66\x55\x44\x33\x22\x11"};
    CHECK(bytes.substr(7, 8) == seed_le);
    // Item count n = 1.
    CHECK(bytes.substr(15, 8) == std::string("\x01\x00\x00\x00\x00\x00\x00\x00", 8));
}

TEST_CASE("deserialization rejects damaged streams") {
    CountBloomFilter filter = make_filter(100);
    for (int i = 0; i < 50; ++i) filter.insert("ACGTACG" + std::to_string(i));
    const std::string bytes = serialize_to_string(filter);

    SECTION("truncated anywhere") {
        for (const std::size_t keep :
             {bytes.size() - 1, bytes.size() - 9, std::size_t(0), std::size_t(3),
              std::size_t(4), std::size_t(30), std::size_t(55), std::size_t(200)}) {
            CAPTURE(keep);
            CHECK_THROWS_AS(deserialize_from_string(bytes.substr(0, keep)), FormatError);
        }
    }

    SECTION("bad magic") {
        std::string copy = bytes;
        copy[0] = 'X';
        CHECK_THROWS_AS(deserialize_from_string(copy), FormatError);
    }

    SECTION("unsupported version") {
        std::string copy = bytes;
        copy[4] = 2;
        CHECK_THROWS_AS(deserialize_from_string(copy), FormatError);
    }

    SECTION("out-of-domain header field") {
        std::string copy = bytes;
        copy[6] = 3;  // alpha below the supported range
        CHECK_THROWS_AS(deserialize_from_string(copy), FormatError);
    }

    SECTION("corrupted payload fails the checksum") {
        std::string copy = bytes;
        copy[60] = char(copy[60] ^ 0x01);
        CHECK_THROWS_AS(deserialize_from_string(copy), FormatError);
    }

    SECTION("corrupted checksum") {
        std::string copy = bytes;
        copy.back() = char(copy.back() ^ 0xFF);
        CHECK_THROWS_AS(deserialize_from_string(copy), FormatError);
    }

    SECTION("dimensions inconsistent with the sizing parameters") {
        std::string copy = bytes;
        copy[31] = char(copy[31] ^ 0x01);  // low byte of X
        CHECK_THROWS_AS(deserialize_from_string(copy), FormatError);
    }
}

TEST_CASE("fill statistics scan the whole grid") {
    CountBloomFilter filter = make_filter(100);
    CHECK(filter.fill_stats().counters_nonzero == 0);

    filter.insert("ACGTACG");
    const auto fill = filter.fill_stats();
    CHECK(fill.counters_nonzero >= 1);
    CHECK(fill.counters_nonzero <= filter.plan().hash_count);
    CHECK(fill.max_value == 1);
    CHECK(fill.counters_saturated == 0);
}
