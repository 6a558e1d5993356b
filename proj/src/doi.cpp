#include "bipdb/doi.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace bipdb {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

constexpr std::array<std::string_view, 9> kResolverPrefixes = {
    "https://doi.org/",    "http://doi.org/",
    "https://dx.doi.org/", "http://dx.doi.org/",
    "https://www.doi.org/",
    "doi.org/",            "dx.doi.org/",
    "www.doi.org/",
    "doi:",
};

} // namespace

std::string normalize_doi(std::string_view raw) {
    std::string out(trim(raw));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    bool stripped = true;
    while (stripped) {
        stripped = false;
        for (std::string_view prefix : kResolverPrefixes) {
            if (out.starts_with(prefix)) {
                out.erase(0, prefix.size());
                std::string_view t = trim(out);
                out.assign(t.begin(), t.end());
                stripped = true;
            }
        }
    }
    return out;
}

bool is_valid_doi(std::string_view doi) {
    if (!doi.starts_with("10.")) return false;
    const size_t slash = doi.find('/');
    if (slash == std::string_view::npos || slash <= 3) return false;

    // registrant: digit groups separated by single dots
    std::string_view registrant = doi.substr(3, slash - 3);
    bool in_group = false;
    for (char c : registrant) {
        if (c >= '0' && c <= '9') {
            in_group = true;
        } else if (c == '.') {
            if (!in_group) return false;
            in_group = false;
        } else {
            return false;
        }
    }
    if (!in_group) return false;

    std::string_view suffix = doi.substr(slash + 1);
    if (suffix.empty()) return false;
    for (char c : suffix) {
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) return false;
    }
    return true;
}

std::optional<Doi> Doi::parse(std::string_view raw) {
    std::string normalized = normalize_doi(raw);
    if (!is_valid_doi(normalized)) return std::nullopt;
    return Doi{std::move(normalized)};
}

} // namespace bipdb
