#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kmerco/errors.hpp"

namespace kmerco {

// (technique - reference) / total. Positive means erroneous k-mers were
// promoted to trustworthy; negative means trustworthy k-mers were lost.
inline double trustworthy_rate(std::uint64_t technique_trustworthy,
                               std::uint64_t oracle_trustworthy, std::uint64_t total_kmers) {
    if (total_kmers == 0) throw std::invalid_argument("total k-mer count must be positive");
    return (double(technique_trustworthy) - double(oracle_trustworthy)) / double(total_kmers);
}

// Zero ignored k-mers reports as ratio 0 rather than a division error.
inline double inserted_to_ignored(std::uint64_t inserted, std::uint64_t ignored) {
    if (ignored == 0) return 0.0;
    return double(inserted) / double(ignored);
}

inline double throughput(std::uint64_t inserted, double elapsed_seconds) {
    if (!(elapsed_seconds > 0.0)) throw std::invalid_argument("elapsed time must be positive");
    return double(inserted) / elapsed_seconds;
}

// One comparison run: pipeline outcome side by side with the exact oracle.
// The dataset rates follow the exact counts; the technique-vs-oracle
// trustworthy_rate is the accuracy headline. The erroneous rate is emitted
// under both normalizations (per total and per distinct), labeled.
struct RunReport {
    std::string dataset;
    std::uint64_t k = 0;
    std::uint64_t tau = 0;
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::uint32_t alpha = 0;
    std::uint32_t hash_count = 0;
    std::uint64_t size_bytes = 0;

    std::uint64_t total_kmers = 0;
    std::uint64_t distinct = 0;  // pipeline counts
    std::uint64_t trustworthy = 0;
    std::uint64_t erroneous = 0;
    std::uint64_t oracle_distinct = 0;  // exact counts
    std::uint64_t oracle_trustworthy = 0;
    std::uint64_t oracle_erroneous = 0;
    std::uint64_t overflow_events = 0;

    double distinct_rate = 0.0;
    double trustworthy_rate_of_dataset = 0.0;
    double erroneous_rate_of_dataset = 0.0;
    double erroneous_rate_of_distinct = 0.0;
    double trustworthy_rate = 0.0;  // signed, technique vs oracle
    double inserted_to_ignored_ratio = 0.0;
    double insertions_per_second = 0.0;
    double elapsed_seconds = 0.0;
};

// Fills the derived rate fields from the count fields already present.
inline void finalize_rates(RunReport& report) {
    if (report.total_kmers > 0) {
        const double total = double(report.total_kmers);
        report.distinct_rate = double(report.oracle_distinct) / total;
        report.trustworthy_rate_of_dataset = double(report.oracle_trustworthy) / total;
        report.erroneous_rate_of_dataset = double(report.oracle_erroneous) / total;
        report.trustworthy_rate =
            kmerco::trustworthy_rate(report.trustworthy, report.oracle_trustworthy,
                                     report.total_kmers);
    }
    if (report.oracle_distinct > 0)
        report.erroneous_rate_of_distinct =
            double(report.oracle_erroneous) / double(report.oracle_distinct);
}

namespace detail {

inline std::string format_double(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

inline std::string csv_safe(std::string field) {
    for (char& c : field)
        if (c == ',' || c == '\n') c = '_';
    return field;
}

}  // namespace detail

inline constexpr std::string_view kReportCsvHeader =
    "dataset,K,tau,alpha,k_h,size_bytes,total,distinct,trustworthy,erroneous,"
    "trustworthy_rate,insert_per_sec,elapsed_s";

inline void write_report(std::ostream& out, const RunReport& r) {
    using detail::format_double;
    out << "dataset = " << r.dataset << '\n'
        << "k = " << r.k << '\n'
        << "tau = " << r.tau << '\n'
        << "x = " << r.x << '\n'
        << "y = " << r.y << '\n'
        << "alpha = " << r.alpha << '\n'
        << "hash_count = " << r.hash_count << '\n'
        << "size_bytes = " << r.size_bytes << '\n'
        << "total_kmers = " << r.total_kmers << '\n'
        << "distinct = " << r.distinct << '\n'
        << "trustworthy = " << r.trustworthy << '\n'
        << "erroneous = " << r.erroneous << '\n'
        << "oracle_distinct = " << r.oracle_distinct << '\n'
        << "oracle_trustworthy = " << r.oracle_trustworthy << '\n'
        << "oracle_erroneous = " << r.oracle_erroneous << '\n'
        << "overflow_events = " << r.overflow_events << '\n'
        << "distinct_rate = " << format_double(r.distinct_rate) << '\n'
        << "trustworthy_rate_of_dataset = " << format_double(r.trustworthy_rate_of_dataset)
        << '\n'
        << "erroneous_rate_of_dataset = " << format_double(r.erroneous_rate_of_dataset) << '\n'
        << "erroneous_rate_of_distinct = " << format_double(r.erroneous_rate_of_distinct) << '\n'
        << "trustworthy_rate = " << format_double(r.trustworthy_rate) << '\n'
        << "inserted_to_ignored = " << format_double(r.inserted_to_ignored_ratio) << '\n'
        << "insertions_per_second = " << format_double(r.insertions_per_second) << '\n'
        << "elapsed_seconds = " << format_double(r.elapsed_seconds) << '\n'
        << '\n'
        << "csv:\n"
        << kReportCsvHeader << '\n'
        << detail::csv_safe(r.dataset) << ',' << r.k << ',' << r.tau << ',' << r.alpha << ','
        << r.hash_count << ',' << r.size_bytes << ',' << r.total_kmers << ',' << r.distinct
        << ',' << r.trustworthy << ',' << r.erroneous << ','
        << format_double(r.trustworthy_rate) << ',' << format_double(r.insertions_per_second)
        << ',' << format_double(r.elapsed_seconds) << '\n';
    if (!out) throw IoError("report write failure");
}

// Inverse of write_report; lossless for every field written above.
inline RunReport parse_report(std::istream& in) {
    RunReport r;
    std::string line;
    bool saw_any = false;
    while (std::getline(in, line)) {
        if (line == "csv:") break;
        const auto sep = line.find(" = ");
        if (sep == std::string::npos) continue;
        saw_any = true;
        const std::string key = line.substr(0, sep);
        const std::string value = line.substr(sep + 3);
        if (key == "dataset") r.dataset = value;
        else if (key == "k") r.k = std::stoull(value);
        else if (key == "tau") r.tau = std::stoull(value);
        else if (key == "x") r.x = std::stoull(value);
        else if (key == "y") r.y = std::stoull(value);
        else if (key == "alpha") r.alpha = std::uint32_t(std::stoul(value));
        else if (key == "hash_count") r.hash_count = std::uint32_t(std::stoul(value));
        else if (key == "size_bytes") r.size_bytes = std::stoull(value);
        else if (key == "total_kmers") r.total_kmers = std::stoull(value);
        else if (key == "distinct") r.distinct = std::stoull(value);
        else if (key == "trustworthy") r.trustworthy = std::stoull(value);
        else if (key == "erroneous") r.erroneous = std::stoull(value);
        else if (key == "oracle_distinct") r.oracle_distinct = std::stoull(value);
        else if (key == "oracle_trustworthy") r.oracle_trustworthy = std::stoull(value);
        else if (key == "oracle_erroneous") r.oracle_erroneous = std::stoull(value);
        else if (key == "overflow_events") r.overflow_events = std::stoull(value);
        else if (key == "distinct_rate") r.distinct_rate = std::stod(value);
        else if (key == "trustworthy_rate_of_dataset")
            r.trustworthy_rate_of_dataset = std::stod(value);
        else if (key == "erroneous_rate_of_dataset")
            r.erroneous_rate_of_dataset = std::stod(value);
        else if (key == "erroneous_rate_of_distinct")
            r.erroneous_rate_of_distinct = std::stod(value);
        else if (key == "trustworthy_rate") r.trustworthy_rate = std::stod(value);
        else if (key == "inserted_to_ignored") r.inserted_to_ignored_ratio = std::stod(value);
        else if (key == "insertions_per_second") r.insertions_per_second = std::stod(value);
        else if (key == "elapsed_seconds") r.elapsed_seconds = std::stod(value);
    }
    if (!saw_any) throw FormatError("not a run report");
    return r;
}

}  // namespace kmerco
