#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bipdb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or unwritable file.
struct IoError : Error {
    using Error::Error;
};

// Malformed input content; `line` is 1-based when known, 0 otherwise.
struct ParseError : Error {
    uint64_t line;
    explicit ParseError(const std::string& msg, uint64_t line_no = 0)
        : Error(line_no ? msg + " (line " + std::to_string(line_no) + ")" : msg), line(line_no) {}
};

// No usable input at all, or a source that cannot be processed.
struct IngestError : Error {
    using Error::Error;
};

// Inputs that must agree with each other do not (e.g. dumps from different graphs).
struct ConsistencyError : Error {
    using Error::Error;
};

} // namespace bipdb
