#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "bipdb/correlation.hpp"
#include "bipdb/export.hpp"

namespace bipdb {

// Immutable DOI -> five-score lookup table joined from one dump per measure.
// Safe for concurrent reads once loaded.
class ScoreStore {
public:
    // Accepts the five dumps in any order; they must cover the five measures
    // exactly once and share one graph id and one DOI set. Violations throw
    // ConsistencyError naming the offending DOI and dump.
    static ScoreStore load(const std::array<std::filesystem::path, 5>& dumps);

    uint64_t size() const { return static_cast<uint64_t>(scores_.size()); }
    const std::string& graph_id() const { return graph_id_; }
    const std::string& loaded_at() const { return loaded_at_; } // ISO 8601 UTC

    // Scores in kAllMeasures order; the query is normalized before lookup.
    std::optional<std::array<double, 5>> get(std::string_view raw_doi) const;

    // Specs parsed from the five filenames, in kAllMeasures order.
    const std::array<DumpSpec, 5>& dump_specs() const { return specs_; }
    const std::array<std::string, 5>& dump_names() const { return names_; }

    // Full table, keyed by normalized DOI.
    const std::unordered_map<std::string, std::array<double, 5>>& rows() const {
        return scores_;
    }

private:
    std::unordered_map<std::string, std::array<double, 5>> scores_;
    std::array<DumpSpec, 5> specs_;
    std::array<std::string, 5> names_;
    std::string graph_id_;
    std::string loaded_at_;
};

// Rankings joined back from five dumps of one graph. Row order inside a dump
// already encodes the ranking tie-break (node ids ascend with DOIs), so this
// equals correlation_matrix over the vectors that produced the dumps.
CorrelationMatrix correlate_dumps(const std::array<std::filesystem::path, 5>& dumps, uint32_t k);

} // namespace bipdb
