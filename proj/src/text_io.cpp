#include "bipdb/text_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <vector>

#include "bipdb/errors.hpp"

namespace bipdb {

namespace {
constexpr size_t kBufferSize = 1 << 16;
}

struct TextReader::Impl {
    gzFile file = nullptr;
    std::vector<char> buf;
    size_t pos = 0;
    size_t len = 0;
    bool eof = false;
    std::string path;

    ~Impl() {
        if (file) gzclose(file);
    }

    bool fill() {
        if (eof) return false;
        int n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()));
        if (n < 0) {
            int errnum = 0;
            const char* msg = gzerror(file, &errnum);
            throw IoError("read error in " + path + ": " + (msg ? msg : "unknown"));
        }
        pos = 0;
        len = static_cast<size_t>(n);
        if (len == 0) eof = true;
        return len > 0;
    }
};

TextReader::TextReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path.string();
    impl_->file = gzopen(impl_->path.c_str(), "rb");
    if (!impl_->file) throw IoError("cannot open " + impl_->path + " for reading");
    gzbuffer(impl_->file, kBufferSize);
    impl_->buf.resize(kBufferSize);
}

TextReader::~TextReader() = default;
TextReader::TextReader(TextReader&&) noexcept = default;
TextReader& TextReader::operator=(TextReader&&) noexcept = default;

bool TextReader::next_line(std::string& line) {
    line.clear();
    Impl& im = *impl_;
    bool got_any = false;
    for (;;) {
        if (im.pos >= im.len && !im.fill()) break;
        const char* start = im.buf.data() + im.pos;
        const char* nl = static_cast<const char*>(std::memchr(start, '\n', im.len - im.pos));
        if (nl) {
            line.append(start, static_cast<size_t>(nl - start));
            im.pos += static_cast<size_t>(nl - start) + 1;
            got_any = true;
            break;
        }
        line.append(start, im.len - im.pos);
        im.pos = im.len;
        got_any = true;
    }
    if (!got_any) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no_;
    return true;
}

struct TextWriter::Impl {
    gzFile gz = nullptr;
    std::ofstream plain;
    std::string path;
    bool open = false;

    ~Impl() {
        if (gz) gzclose(gz);
    }
};

TextWriter::TextWriter(const std::filesystem::path& path, bool compressed)
    : impl_(std::make_unique<Impl>()) {
    impl_->path = path.string();
    if (compressed) {
        impl_->gz = gzopen(impl_->path.c_str(), "wb6");
        if (!impl_->gz) throw IoError("cannot open " + impl_->path + " for writing");
        gzbuffer(impl_->gz, kBufferSize);
    } else {
        impl_->plain.open(impl_->path, std::ios::binary | std::ios::trunc);
        if (!impl_->plain) throw IoError("cannot open " + impl_->path + " for writing");
    }
    impl_->open = true;
}

TextWriter::~TextWriter() = default;
TextWriter::TextWriter(TextWriter&&) noexcept = default;
TextWriter& TextWriter::operator=(TextWriter&&) noexcept = default;

void TextWriter::write(std::string_view data) {
    Impl& im = *impl_;
    if (!im.open) throw IoError("write on closed file " + im.path);
    if (im.gz) {
        if (!data.empty() &&
            gzwrite(im.gz, data.data(), static_cast<unsigned>(data.size())) <= 0) {
            throw IoError("write error in " + im.path);
        }
    } else {
        im.plain.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!im.plain) throw IoError("write error in " + im.path);
    }
}

void TextWriter::close() {
    Impl& im = *impl_;
    if (!im.open) return;
    im.open = false;
    if (im.gz) {
        int rc = gzclose(im.gz);
        im.gz = nullptr;
        if (rc != Z_OK) throw IoError("close error in " + im.path);
    } else {
        im.plain.close();
        if (im.plain.fail()) throw IoError("close error in " + im.path);
    }
}

} // namespace bipdb
