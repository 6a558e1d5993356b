#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bipdb/graph.hpp"

namespace bipdb {

// The five impact measures, in canonical order. CC counts all citations;
// iCC counts only those arriving within an incubation window after
// publication; PR is the stationary score of a random reader who follows
// references with probability alpha; RAM weights each citation by the decay
// gamma^(age of the citing paper); AttRank replaces PR's uniform teleport
// with a mix of recent-attention share and an exponential age prior.
enum class Measure { CC, ICC, PR, RAM, AttRank };

inline constexpr std::array<Measure, 5> kAllMeasures = {
    Measure::CC, Measure::ICC, Measure::PR, Measure::RAM, Measure::AttRank};

// Display / filename tag: "CC", "iCC", "PR", "RAM", "AttRank".
std::string_view measure_tag(Measure m);

// Lowercase identifier used in JSON payloads and config keys:
// "cc", "icc", "pagerank", "ram", "attrank".
std::string_view measure_key(Measure m);

// Parses either spelling above, case-insensitively.
std::optional<Measure> parse_measure(std::string_view text);

struct MeasureParams {
    // Reference "now" for the time-aware measures; defaults to the wall
    // clock so a freshly built corpus scores sensibly out of the box.
    int32_t current_year = current_utc_year();

    int32_t icc_window = 3; // y: years after publication that count for iCC

    double pr_alpha = 0.5;     // damping, in [0,1]
    double pr_epsilon = 1e-12; // L1 convergence threshold

    double ram_gamma = 0.6; // per-year citation decay, in (0,1)

    double att_alpha = 0.2; // weight of the citation-following term
    double att_beta = 0.5;  // weight of the recent-attention term
    double att_gamma = 0.3; // weight of the exponential age prior
    double att_rho = 0.16;  // age-decay exponent, > 0
    // Length of the recent-attention window in years; 0 inherits icc_window.
    int32_t att_window = 0;

    int32_t max_iterations = 200;

    // Worker threads for the parallel kernels; 0 means all available cores.
    int32_t workers = 0;

    int32_t resolved_att_window() const { return att_window > 0 ? att_window : icc_window; }

    bool operator==(const MeasureParams&) const = default;
};

// Throws std::invalid_argument naming the offending parameter. Checks only
// the parameters the given measure reads; `validate_params` checks them all.
void validate_params(const MeasureParams& p, Measure m);
void validate_params(const MeasureParams& p);

struct ScoreVector {
    Measure measure = Measure::CC;
    std::vector<double> scores; // indexed by node id
    MeasureParams params;
    int32_t iterations_run = 0; // 0 for the non-iterative measures
    bool converged = true;
    // Future-dated inputs clamped to age zero: citing papers newer than
    // current_year (RAM), or publications newer than current_year feeding
    // the AttRank age prior.
    uint64_t future_dated = 0;
};

// score[i] = in-degree of i.
ScoreVector citation_count(const CitationGraph& g);

// score[i] = number of citing papers j with year(j) <= year(i) + icc_window;
// the boundary year counts.
ScoreVector incubation_citation_count(const CitationGraph& g, const MeasureParams& p);

// Power iteration for: s_i = alpha * sum_j P_ij * s_j + (1 - alpha) / N,
// where P is the column-stochastic transition matrix (column j uniform over
// the papers j cites) and the mass of reference-less papers is redistributed
// uniformly every step. Starts from `start` when given (must sum to 1), else
// from the uniform vector. Stops when the L1 step difference drops to
// pr_epsilon or max_iterations is hit; `converged` records which.
ScoreVector pagerank(const CitationGraph& g, const MeasureParams& p,
                     const std::vector<double>* start = nullptr);

// score[i] = sum over citing papers j of ram_gamma^(current_year - year(j)).
// Future-dated citing years contribute weight 1 and are tallied.
ScoreVector ram(const CitationGraph& g, const MeasureParams& p);

// Att[i]: i's share of all citations made in the att_window most recent
// years (citing year >= current_year - window + 1). Sums to 1 when any such
// citation exists; all zeros otherwise.
std::vector<double> attention_score(const CitationGraph& g, const MeasureParams& p);

// Power iteration for: s_i = alpha * sum_j P_ij * s_j + beta * Att(i)
//                          + gamma * c * exp(-rho * (current_year - year(i))),
// with c normalizing the age prior to sum 1 and the same dangling handling
// and stopping rule as pagerank. When the attention window is empty the beta
// mass shifts onto the age prior so the scores still sum to 1.
ScoreVector attrank(const CitationGraph& g, const MeasureParams& p,
                    const std::vector<double>* start = nullptr);

// All five measures with shared params, in kAllMeasures order. Each vector
// is identical to its standalone function's output.
std::array<ScoreVector, 5> compute_all(const CitationGraph& g, const MeasureParams& p);

ScoreVector compute(const CitationGraph& g, const MeasureParams& p, Measure m);

} // namespace bipdb
