#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kmerco {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File or stream failure outside record parsing.
struct IoError : Error {
    using Error::Error;
};

// Malformed record content; `line` is 1-based within the offending source.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line_number)
        : Error(what + " (line " + std::to_string(line_number) + ")"), line(line_number) {}

    std::size_t line;
};

// Cross-artifact inconsistency, e.g. classifying a distinct list against a
// filter it was not built with.
struct IntegrityError : Error {
    using Error::Error;
};

// Rejected filter image during deserialization.
struct FormatError : Error {
    using Error::Error;
};

}  // namespace kmerco
