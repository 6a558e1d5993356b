#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace bipdb {

// Lowercases, trims surrounding whitespace and strips resolver prefixes
// ("https://doi.org/", "http://dx.doi.org/", "doi:", ...) until none remain,
// so the function is idempotent.
std::string normalize_doi(std::string_view raw);

// Structural check on an already-normalized string: "10.<registrant>/<suffix>"
// where the registrant is dot-separated digit groups and the suffix is
// non-empty and free of control characters.
bool is_valid_doi(std::string_view doi);

// A normalized DOI. The checked way in is parse(); the raw aggregate form is
// kept open for code that already holds normalized values.
struct Doi {
    std::string value;

    static std::optional<Doi> parse(std::string_view raw);

    bool operator==(const Doi&) const = default;
    auto operator<=>(const Doi&) const = default;
};

} // namespace bipdb
