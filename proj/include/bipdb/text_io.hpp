#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace bipdb {

// Line reader over a plain or gzip-compressed text file. zlib's gz layer
// auto-detects the magic bytes, so callers never care which one they got.
// Lines are yielded without the trailing "\n" / "\r\n".
class TextReader {
public:
    explicit TextReader(const std::filesystem::path& path); // throws IoError
    ~TextReader();
    TextReader(TextReader&&) noexcept;
    TextReader& operator=(TextReader&&) noexcept;
    TextReader(const TextReader&) = delete;
    TextReader& operator=(const TextReader&) = delete;

    // False at end of file. `line` is reused between calls.
    bool next_line(std::string& line);
    uint64_t line_number() const { return line_no_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    uint64_t line_no_ = 0;
};

// Text writer that gzips its output when `compressed` is set. Gzip headers
// are written with a zero mtime, so identical content produces identical
// bytes on every run.
class TextWriter {
public:
    TextWriter(const std::filesystem::path& path, bool compressed); // throws IoError
    ~TextWriter();
    TextWriter(TextWriter&&) noexcept;
    TextWriter& operator=(TextWriter&&) noexcept;
    TextWriter(const TextWriter&) = delete;
    TextWriter& operator=(const TextWriter&) = delete;

    void write(std::string_view data);
    void close(); // flushes; throws IoError on failure

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace bipdb
