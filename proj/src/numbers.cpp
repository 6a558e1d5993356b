#include "bipdb/numbers.hpp"

#include <charconv>
#include <cstdio>

namespace bipdb {

std::string format_double_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_double_17(double v) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf, static_cast<size_t>(len));
}

std::optional<double> parse_double(std::string_view text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end || text.empty()) return std::nullopt;
    return value;
}

std::optional<int64_t> parse_int(std::string_view text) {
    int64_t value = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end || text.empty()) return std::nullopt;
    return value;
}

} // namespace bipdb
