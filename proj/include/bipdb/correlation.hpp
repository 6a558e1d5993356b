#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bipdb/measures.hpp"

namespace bipdb {

// The first k node ids of a score vector, best first. Ties are cut
// deterministically: higher score first, equal scores by ascending node id.
struct TopKRanking {
    Measure measure = Measure::CC;
    uint32_t k = 0;                // the requested k; entries may be shorter
    std::vector<uint32_t> entries; // min(k, n) distinct ids
};

TopKRanking top_k(const ScoreVector& sv, uint32_t k);

// Top-k Spearman correlation: over the union of the two entry sets, each
// element takes its 1-based rank where present and rank k+1 where absent;
// the result is the Pearson correlation of the two rank vectors. Equal
// rankings short-circuit to exactly 1. A constant rank vector leaves Pearson
// undefined; the value is then 0 with `degenerate` set.
struct RhoMin {
    double value = 0.0;
    bool degenerate = false;
};

// Requires r1.k == r2.k; throws std::invalid_argument otherwise.
RhoMin rho_min(const TopKRanking& r1, const TopKRanking& r2);

struct CorrelationMatrix {
    uint32_t k = 0;
    std::array<Measure, 5> measures = kAllMeasures;
    std::array<std::array<double, 5>, 5> values{};    // symmetric, unit diagonal
    std::array<std::array<bool, 5>, 5> degenerate{};
};

// Pairwise rho_min over the five rankings. All vectors must have the same
// length (same graph); k >= 1.
CorrelationMatrix correlation_matrix(const std::array<ScoreVector, 5>& vectors, uint32_t k);

// Square table with a measure-tag header row and column.
void write_correlation_csv(const CorrelationMatrix& m, const std::filesystem::path& path);

// Pretty-printed object: k, measure tags, row-major values, degenerate pairs.
std::string correlation_to_json(const CorrelationMatrix& m);

} // namespace bipdb
