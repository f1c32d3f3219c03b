#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "kmerco/dna.hpp"
#include "kmerco/errors.hpp"

namespace kmerco {

struct SequenceRecord {
    std::string id;
    std::string sequence;
};

enum class SequenceFormat { fasta, fastq, raw_lines };

inline SequenceFormat parse_sequence_format(std::string_view name) {
    if (name == "fasta") return SequenceFormat::fasta;
    if (name == "fastq") return SequenceFormat::fastq;
    if (name == "lines") return SequenceFormat::raw_lines;
    throw std::invalid_argument("unknown sequence format: " + std::string(name));
}

// Line-oriented byte source; implementations strip trailing \n and \r.
class LineSource {
public:
    virtual ~LineSource() = default;
    virtual bool next(std::string& line) = 0;
    std::size_t line_number() const { return line_; }

protected:
    std::size_t line_ = 0;
};

class StreamLineSource final : public LineSource {
public:
    explicit StreamLineSource(std::istream& in) : in_(in) {}

    bool next(std::string& line) override {
        if (!std::getline(in_, line)) {
            if (in_.bad()) throw IoError("stream read failure");
            return false;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_;
        return true;
    }

private:
    std::istream& in_;
};

// Reads plain or gzip files; zlib autodetects the gzip header, so one source
// covers both.
class GzipLineSource final : public LineSource {
public:
    explicit GzipLineSource(const std::string& path)
        : path_(path), file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw IoError("cannot open " + path);
        gzbuffer(file_, 1 << 16);
    }

    ~GzipLineSource() override {
        if (file_) gzclose(file_);
    }

    GzipLineSource(const GzipLineSource&) = delete;
    GzipLineSource& operator=(const GzipLineSource&) = delete;

    bool next(std::string& line) override {
        line.clear();
        char buf[4096];
        bool got = false;
        while (gzgets(file_, buf, sizeof buf)) {
            got = true;
            line += buf;
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                break;
            }
        }
        if (!got) {
            int err = Z_OK;
            gzerror(file_, &err);
            if (err != Z_OK && err != Z_STREAM_END)
                throw IoError("read failure on " + path_);
            return false;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_;
        return true;
    }

private:
    std::string path_;
    gzFile file_ = nullptr;
};

// Streaming record parser. Memory use is bounded by the longest record, not
// the file. Malformed records throw ParseError with the offending line number;
// with skip_bad_records they are dropped and counted instead.
class SequenceReader {
public:
    SequenceReader(LineSource& source, SequenceFormat format, bool skip_bad_records = false)
        : src_(source), format_(format), skip_bad_(skip_bad_records) {}

    bool next(SequenceRecord& rec) {
        switch (format_) {
            case SequenceFormat::fasta: return next_fasta(rec);
            case SequenceFormat::fastq: return next_fastq(rec);
            case SequenceFormat::raw_lines: return next_lines(rec);
        }
        return false;
    }

    bool next(std::string& sequence) {
        SequenceRecord rec;
        if (!next(rec)) return false;
        sequence = std::move(rec.sequence);
        return true;
    }

    std::size_t skipped_records() const { return skipped_; }

private:
    // Throws in strict mode; in skip mode counts the bad line or record so the
    // caller can move on.
    void fail(const std::string& what, std::size_t line) {
        if (!skip_bad_) throw ParseError(what, line);
        ++skipped_;
    }

    bool read_line(std::string& line) {
        if (have_pending_) {
            line = std::move(pending_);
            have_pending_ = false;
            return true;
        }
        return src_.next(line);
    }

    bool next_fasta(SequenceRecord& rec) {
        std::string line;
        while (true) {
            // Find the record header.
            bool have_header = false;
            while (read_line(line)) {
                if (line.empty()) continue;
                if (line[0] == '>') {
                    have_header = true;
                    break;
                }
                fail("expected '>' header", src_.line_number());
            }
            if (!have_header) return false;

            rec.id = line.substr(1);
            rec.sequence.clear();
            const std::size_t header_line = src_.line_number();
            while (src_.next(line)) {
                if (line.empty()) continue;
                if (line[0] == '>') {
                    pending_ = std::move(line);
                    have_pending_ = true;
                    break;
                }
                rec.sequence += line;
            }
            if (!rec.sequence.empty()) return true;
            fail("record has no sequence data", header_line);
        }
    }

    bool next_fastq(SequenceRecord& rec) {
        std::string line;
        while (true) {
            bool have_header = false;
            while (read_line(line)) {
                if (line.empty()) continue;
                if (line[0] == '@') {
                    have_header = true;
                    break;
                }
                // Skip mode resyncs on the next '@' line.
                fail("expected '@' header", src_.line_number());
            }
            if (!have_header) return false;

            rec.id = line.substr(1);
            const std::size_t header_line = src_.line_number();
            std::string seq, plus, qual;
            if (!src_.next(seq)) {
                fail("truncated record", header_line);
                continue;
            }
            if (!src_.next(plus) || plus.empty() || plus[0] != '+') {
                fail("expected '+' separator", src_.line_number());
                continue;
            }
            if (!src_.next(qual)) {
                fail("truncated record", src_.line_number());
                continue;
            }
            if (qual.size() != seq.size()) {
                fail("quality length does not match sequence length", src_.line_number());
                continue;
            }
            if (seq.empty()) {
                fail("record has no sequence data", header_line);
                continue;
            }
            rec.sequence = std::move(seq);
            return true;
        }
    }

    bool next_lines(SequenceRecord& rec) {
        std::string line;
        while (read_line(line)) {
            if (line.empty()) continue;
            rec.id = "line-" + std::to_string(src_.line_number());
            rec.sequence = std::move(line);
            return true;
        }
        return false;
    }

    LineSource& src_;
    SequenceFormat format_;
    bool skip_bad_;
    std::size_t skipped_ = 0;
    std::string pending_;
    bool have_pending_ = false;
};

// --- k-mer list files: one uppercase k-mer per line, newline-terminated -----

class KmerListWriter {
public:
    explicit KmerListWriter(std::ostream& out) : out_(out) {}

    void write(std::string_view kmer) {
        out_ << kmer << '\n';
        if (!out_) throw IoError("k-mer list write failure");
    }

private:
    std::ostream& out_;
};

template <typename Range>
void write_kmer_list(std::ostream& out, const Range& kmers) {
    KmerListWriter writer(out);
    for (const auto& kmer : kmers) writer.write(kmer);
}

class KmerListReader {
public:
    explicit KmerListReader(LineSource& source) : src_(source) {}

    bool next(std::string& kmer) {
        while (src_.next(kmer)) {
            if (kmer.empty()) continue;
            for (const char c : kmer)
                if (!is_valid_base(c))
                    throw ParseError("invalid k-mer character", src_.line_number());
            return true;
        }
        return false;
    }

private:
    LineSource& src_;
};

}  // namespace kmerco
