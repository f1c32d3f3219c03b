// Command-line front end for the two-phase k-mer counting pipeline.
//
// Exit codes: 0 success, 2 usage error, 3 I/O or malformed input,
// 4 artifact integrity error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kmerco/kmerco.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kFilterFile = "countbf.bin";
constexpr const char* kDistinctFile = "distinct.txt";
constexpr const char* kTrustworthyFile = "trustworthy.txt";
constexpr const char* kErroneousFile = "erroneous.txt";
constexpr const char* kInsertionStatsFile = "insertion_stats.txt";
constexpr const char* kClassificationStatsFile = "classification_stats.txt";
constexpr const char* kOracleCountsFile = "oracle_counts.tsv";
constexpr const char* kOracleTrustworthyFile = "oracle_trustworthy.txt";
constexpr const char* kOracleErroneousFile = "oracle_erroneous.txt";
constexpr const char* kReportFile = "report.txt";

struct Options {
    std::string input;
    std::string out_dir = ".";
    std::string format = "fasta";
    std::string filter_path;
    std::string distinct_path;
    std::size_t k = 28;
    std::uint64_t tau = 5;
    double fpp = 0.001;
    std::uint32_t alpha = 8;
    std::uint32_t hashes = 2;
    std::uint64_t seed = 42;
    std::uint64_t expected_n = 0;  // 0: derive by pre-scanning the input
    std::uint64_t plan_n = 0;
    bool skip_bad = false;
};

std::string fmt_double(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw kmerco::IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw kmerco::IoError("cannot open " + path.string());
    return in;
}

std::string dataset_label(const fs::path& input) {
    fs::path p = input.filename();
    while (p.has_extension()) p = p.stem();
    return p.string();
}

std::uint64_t count_windows(const Options& opt) {
    kmerco::GzipLineSource lines(opt.input);
    kmerco::SequenceReader reader(lines, kmerco::parse_sequence_format(opt.format),
                                  opt.skip_bad);
    std::string sequence;
    std::uint64_t windows = 0;
    while (reader.next(sequence))
        kmerco::for_each_kmer(sequence, opt.k, [&](std::string_view) { ++windows; });
    return windows;
}

kmerco::CountBloomFilter load_filter(const fs::path& path) {
    std::ifstream in = open_in(path, std::ios::binary);
    return kmerco::CountBloomFilter::deserialize(in);
}

void write_plan_lines(std::ostream& out, const kmerco::FilterPlan& plan) {
    out << "n = " << plan.n << '\n'
        << "fpp = " << fmt_double(plan.fpp) << '\n'
        << "alpha = " << plan.alpha << '\n'
        << "hash_count = " << plan.hash_count << '\n'
        << "seed = " << plan.seed << '\n'
        << "m_bits = " << plan.m_bits << '\n'
        << "v = " << fmt_double(plan.v) << '\n'
        << "x = " << plan.x << '\n'
        << "y = " << plan.y << '\n'
        << "counters_per_cell = " << plan.eta << '\n'
        << "wasted_bits_per_cell = " << plan.wasted_bits << '\n'
        << "size_bytes = " << plan.size_bytes() << '\n'
        << "size_mb = " << fmt_double(double(plan.size_bytes()) / 1e6) << '\n';
}

struct CountResult {
    kmerco::FilterPlan plan;
    kmerco::CountBloomFilter filter;
    kmerco::InsertionStats stats;
    std::uint64_t skipped_records = 0;
};

CountResult run_count(const Options& opt) {
    const auto format = kmerco::parse_sequence_format(opt.format);
    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);

    std::uint64_t n = opt.expected_n != 0 ? opt.expected_n : count_windows(opt);
    if (n == 0) n = 1;  // empty input still gets a (tiny) valid filter
    const kmerco::FilterPlan plan =
        kmerco::plan_dimensions(n, opt.fpp, opt.alpha, opt.hashes, opt.seed);

    CountResult result{plan, kmerco::CountBloomFilter(plan), {}, 0};

    kmerco::GzipLineSource lines(opt.input);
    kmerco::SequenceReader reader(lines, format, opt.skip_bad);
    {
        std::ofstream distinct_out = open_out(out_dir / kDistinctFile);
        kmerco::KmerListWriter distinct_sink(distinct_out);
        result.stats = kmerco::insertion_phase(reader, opt.k, result.filter, distinct_sink);
    }
    result.skipped_records = reader.skipped_records();

    {
        std::ofstream filter_out = open_out(out_dir / kFilterFile, std::ios::binary);
        result.filter.serialize(filter_out);
    }

    std::ofstream stats_out = open_out(out_dir / kInsertionStatsFile);
    const auto& s = result.stats;
    const double rate =
        s.elapsed_seconds > 0.0 ? kmerco::throughput(s.inserted, s.elapsed_seconds) : 0.0;
    for (std::ostream* out : {static_cast<std::ostream*>(&stats_out), &std::cout}) {
        write_plan_lines(*out, plan);
        *out << "k = " << opt.k << '\n'
             << "total_kmers = " << s.total_kmers << '\n'
             << "inserted = " << s.inserted << '\n'
             << "first_occurrences = " << s.first_occurrences << '\n'
             << "rejected_windows = " << s.rejected_windows << '\n'
             << "overflow_events = " << s.overflow_events << '\n'
             << "skipped_records = " << result.skipped_records << '\n'
             << "elapsed_seconds = " << fmt_double(s.elapsed_seconds) << '\n'
             << "insertions_per_second = " << fmt_double(rate) << '\n';
    }
    return result;
}

kmerco::ClassificationStats run_classify(const Options& opt,
                                         const kmerco::CountBloomFilter& filter,
                                         const fs::path& distinct_path) {
    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);

    kmerco::GzipLineSource lines(distinct_path.string());
    kmerco::KmerListReader distinct(lines);
    std::ofstream trust_out = open_out(out_dir / kTrustworthyFile);
    std::ofstream err_out = open_out(out_dir / kErroneousFile);
    kmerco::KmerListWriter trust_sink(trust_out);
    kmerco::KmerListWriter err_sink(err_out);

    const kmerco::ClassificationStats stats =
        kmerco::classification_phase(filter, distinct, opt.tau, trust_sink, err_sink);

    std::ofstream stats_out = open_out(out_dir / kClassificationStatsFile);
    for (std::ostream* out : {static_cast<std::ostream*>(&stats_out), &std::cout}) {
        *out << "tau = " << stats.tau << '\n'
             << "distinct = " << stats.distinct << '\n'
             << "trustworthy = " << stats.trustworthy << '\n'
             << "erroneous = " << stats.erroneous << '\n';
    }
    return stats;
}

struct OracleResult {
    kmerco::ExactCounts counts;
    kmerco::ExactClassification classes;
};

OracleResult run_oracle(const Options& opt) {
    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);

    kmerco::GzipLineSource lines(opt.input);
    kmerco::SequenceReader reader(lines, kmerco::parse_sequence_format(opt.format),
                                  opt.skip_bad);
    OracleResult result;
    result.counts = kmerco::exact_count(reader, opt.k, opt.seed);
    result.classes = kmerco::exact_classify(result.counts, opt.tau);

    {
        std::ofstream counts_out = open_out(out_dir / kOracleCountsFile);
        kmerco::dump_exact_counts(result.counts, counts_out);
    }
    {
        std::ofstream trust_out = open_out(out_dir / kOracleTrustworthyFile);
        kmerco::write_kmer_list(trust_out, result.classes.trustworthy);
        std::ofstream err_out = open_out(out_dir / kOracleErroneousFile);
        kmerco::write_kmer_list(err_out, result.classes.erroneous);
    }

    std::cout << "oracle_total = " << result.counts.total << '\n'
              << "oracle_distinct = " << result.classes.distinct.size() << '\n'
              << "oracle_trustworthy = " << result.classes.trustworthy.size() << '\n'
              << "oracle_erroneous = " << result.classes.erroneous.size() << '\n';
    return result;
}

void run_compare(const Options& opt) {
    CountResult counted = run_count(opt);
    const kmerco::ClassificationStats classified =
        run_classify(opt, counted.filter, fs::path(opt.out_dir) / kDistinctFile);
    OracleResult oracle = run_oracle(opt);

    if (oracle.counts.total != counted.stats.total_kmers)
        throw kmerco::IntegrityError(
            "oracle total (" + std::to_string(oracle.counts.total) +
            ") does not match pipeline total (" + std::to_string(counted.stats.total_kmers) +
            "); the two passes saw different inputs");

    kmerco::RunReport report;
    report.dataset = dataset_label(opt.input);
    report.k = opt.k;
    report.tau = opt.tau;
    report.x = counted.plan.x;
    report.y = counted.plan.y;
    report.alpha = counted.plan.alpha;
    report.hash_count = counted.plan.hash_count;
    report.size_bytes = counted.plan.size_bytes();
    report.total_kmers = counted.stats.total_kmers;
    report.distinct = classified.distinct;
    report.trustworthy = classified.trustworthy;
    report.erroneous = classified.erroneous;
    report.oracle_distinct = oracle.classes.distinct.size();
    report.oracle_trustworthy = oracle.classes.trustworthy.size();
    report.oracle_erroneous = oracle.classes.erroneous.size();
    report.overflow_events = counted.stats.overflow_events;
    report.inserted_to_ignored_ratio = kmerco::inserted_to_ignored(
        counted.stats.inserted, counted.stats.total_kmers - counted.stats.inserted);
    report.elapsed_seconds = counted.stats.elapsed_seconds;
    report.insertions_per_second =
        counted.stats.elapsed_seconds > 0.0
            ? kmerco::throughput(counted.stats.inserted, counted.stats.elapsed_seconds)
            : 0.0;
    kmerco::finalize_rates(report);

    std::ofstream report_out = open_out(fs::path(opt.out_dir) / kReportFile);
    kmerco::write_report(report_out, report);
    kmerco::write_report(std::cout, report);
}

void run_info(const fs::path& filter_path) {
    const kmerco::CountBloomFilter filter = load_filter(filter_path);
    write_plan_lines(std::cout, filter.plan());
    const auto fill = filter.fill_stats();
    const std::uint64_t total_counters = filter.plan().total_counters();
    std::cout << "cells = " << filter.plan().cell_count() << '\n'
              << "cells_nonzero = " << fill.cells_nonzero << '\n'
              << "counters = " << total_counters << '\n'
              << "counters_nonzero = " << fill.counters_nonzero << '\n'
              << "counters_saturated = " << fill.counters_saturated << '\n'
              << "max_counter_value = " << fill.max_value << '\n'
              << "fill_fraction = "
              << fmt_double(total_counters > 0
                                ? double(fill.counters_nonzero) / double(total_counters)
                                : 0.0)
              << '\n';
}

void add_sizing_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--fpp", opt.fpp, "Target false positive probability in (0,1)");
    cmd->add_option("--alpha", opt.alpha, "Counter bit-length")->check(CLI::Range(5, 16));
    cmd->add_option("--hashes", opt.hashes, "Number of hash functions")
        ->check(CLI::Range(1, 255));
    cmd->add_option("--seed", opt.seed, "Base hash seed");
}

void add_input_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("input", opt.input, "Input sequence file (plain or gzip)")
        ->required();
    cmd->add_option("--format", opt.format, "Input format")
        ->check(CLI::IsMember({"fasta", "fastq", "lines"}));
    cmd->add_option("--k", opt.k, "K-mer length")->check(CLI::Range(std::size_t(1), std::size_t(4096)));
    cmd->add_flag("--skip-bad-records", opt.skip_bad,
                  "Drop malformed records instead of failing");
    cmd->add_option("--out-dir", opt.out_dir, "Directory for output artifacts");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Two-phase k-mer counting over a packed-counter Bloom filter"};
    app.require_subcommand(1);

    CLI::App* count = app.add_subcommand(
        "count", "Insertion phase: build the filter and the distinct k-mer list");
    add_input_options(count, opt);
    add_sizing_options(count, opt);
    count->add_option("--expected-n", opt.expected_n,
                      "Expected total k-mer count; skips the sizing pre-scan");

    CLI::App* classify = app.add_subcommand(
        "classify", "Classification phase: split distinct k-mers by threshold");
    classify->add_option("--filter", opt.filter_path, "Filter binary from `count`");
    classify->add_option("--distinct", opt.distinct_path, "Distinct list from `count`");
    classify->add_option("--tau", opt.tau, "Frequency threshold")
        ->check(CLI::Range(std::uint64_t(1), UINT64_MAX));
    classify->add_option("--out-dir", opt.out_dir, "Directory for output artifacts");

    CLI::App* oracle = app.add_subcommand(
        "oracle", "Exact counting and classification of the input");
    add_input_options(oracle, opt);
    oracle->add_option("--tau", opt.tau, "Frequency threshold")
        ->check(CLI::Range(std::uint64_t(1), UINT64_MAX));
    oracle->add_option("--seed", opt.seed, "Base hash seed");

    CLI::App* compare = app.add_subcommand(
        "compare", "Run count, classify and oracle, then emit a comparison report");
    add_input_options(compare, opt);
    add_sizing_options(compare, opt);
    compare->add_option("--tau", opt.tau, "Frequency threshold")
        ->check(CLI::Range(std::uint64_t(1), UINT64_MAX));
    compare->add_option("--expected-n", opt.expected_n,
                        "Expected total k-mer count; skips the sizing pre-scan");

    CLI::App* info = app.add_subcommand("info", "Print a filter binary's plan and fill");
    info->add_option("filter", opt.filter_path, "Filter binary")->required();

    CLI::App* plan = app.add_subcommand("plan", "Print filter dimensions without building");
    plan->add_option("--n", opt.plan_n, "Expected total k-mer count")->required();
    add_sizing_options(plan, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*count) {
            run_count(opt);
        } else if (*classify) {
            const fs::path filter_path = opt.filter_path.empty()
                                             ? fs::path(opt.out_dir) / kFilterFile
                                             : fs::path(opt.filter_path);
            const fs::path distinct_path = opt.distinct_path.empty()
                                               ? fs::path(opt.out_dir) / kDistinctFile
                                               : fs::path(opt.distinct_path);
            run_classify(opt, load_filter(filter_path), distinct_path);
        } else if (*oracle) {
            run_oracle(opt);
        } else if (*compare) {
            run_compare(opt);
        } else if (*info) {
            run_info(opt.filter_path);
        } else if (*plan) {
            write_plan_lines(std::cout, kmerco::plan_dimensions(opt.plan_n, opt.fpp, opt.alpha,
                                                                opt.hashes, opt.seed));
        }
    } catch (const kmerco::IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << '\n';
        return 4;
    } catch (const kmerco::InsertionAborted& e) {
        std::cerr << "error: " << e.what() << '\n'
                  << "progress: " << e.partial.total_kmers << " k-mers, "
                  << e.partial.first_occurrences << " distinct written\n";
        return 3;
    } catch (const kmerco::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
