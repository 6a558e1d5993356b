#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bipdb/doi.hpp"

namespace bipdb {

// Publication as it arrives from ingest. Records without a usable year are
// carried through reporting but never become graph nodes.
struct PubRecord {
    Doi doi;
    std::optional<int32_t> year;
};

// (citing, cited): the citing paper references the cited one.
struct CitationEdge {
    Doi citing;
    Doi cited;
};

int32_t current_utc_year();

// Publication-year sanity window: [1000, current year + 2].
bool is_plausible_year(int32_t year);

// Accounting for everything a build dropped.
struct GraphBuildReport {
    uint64_t records_in = 0;
    uint64_t edges_in = 0;
    uint64_t malformed_record_dois = 0;
    uint64_t duplicate_records = 0;
    uint64_t records_missing_year = 0; // unique records without a usable year
    uint64_t malformed_edge_dois = 0;
    uint64_t self_loops = 0;
    uint64_t unknown_endpoint = 0;
    uint64_t missing_year_endpoint = 0;
    uint64_t duplicate_edges = 0;

    uint64_t skipped_edges() const {
        return malformed_edge_dois + self_loops + unknown_endpoint + missing_year_endpoint +
               duplicate_edges;
    }

    std::string to_json() const; // pretty-printed, stable key order
};

// Immutable citation graph over publications with known years. Node ids are
// dense 0..n-1 in ascending lexicographic DOI order. Edge (j -> i) means
// "paper j cites paper i"; storage is in-edge CSR because every measure
// aggregates over the papers citing i. Safe for concurrent reads.
class CitationGraph {
public:
    CitationGraph() = default;
    CitationGraph(const CitationGraph&) = delete;
    CitationGraph& operator=(const CitationGraph&) = delete;
    CitationGraph(CitationGraph&&) = default;
    CitationGraph& operator=(CitationGraph&&) = default;

    uint32_t node_count() const { return static_cast<uint32_t>(dois_.size()); }
    uint64_t edge_count() const { return in_edges_.size(); }

    std::string_view doi(uint32_t id) const { return dois_[check(id)]; }
    int32_t year(uint32_t id) const { return years_[check(id)]; }

    // Node id for a normalized DOI, if present.
    std::optional<uint32_t> find(std::string_view normalized_doi) const;

    // Citing nodes of `id`, ascending id order.
    std::span<const uint32_t> in_neighbors(uint32_t id) const;

    uint32_t in_degree(uint32_t id) const {
        check(id);
        return static_cast<uint32_t>(in_offsets_[id + 1] - in_offsets_[id]);
    }
    uint32_t out_degree(uint32_t id) const { return out_degree_[check(id)]; }

    // Column weight of the stochastic transition matrix P (1/out_degree);
    // nullopt marks a dangling node.
    std::optional<double> transition_column_weight(uint32_t id) const;

    // Valid only when node_count() > 0.
    int32_t min_year() const { return min_year_; }
    int32_t max_year() const { return max_year_; }

    bool operator==(const CitationGraph& other) const;

private:
    friend class GraphAssembler;

    uint32_t check(uint32_t id) const;

    std::vector<std::string> dois_;
    std::vector<int32_t> years_;
    std::vector<uint64_t> in_offsets_; // n + 1
    std::vector<uint32_t> in_edges_;   // citing ids, ascending within each node
    std::vector<uint32_t> out_degree_;
    std::unordered_map<std::string, uint32_t> id_index_;
    int32_t min_year_ = 0;
    int32_t max_year_ = 0;
};

struct GraphBuild {
    CitationGraph graph;
    GraphBuildReport report;
};

// Full validating build: normalizes every DOI, resolves duplicate records by
// the minimum-year rule, and drops (with per-reason counts) malformed,
// self-loop, unknown-endpoint, year-less-endpoint and duplicate edges.
// Deterministic: identical input multisets produce identical graphs.
GraphBuild build_graph(const std::vector<PubRecord>& records,
                       const std::vector<CitationEdge>& edges);

// Assembly from pre-deduplicated inputs: `dois` are unique and normalized,
// `edges` are (citing, cited) index pairs free of self-loops and duplicates.
// Year-less nodes and the edges touching them are still filtered here.
GraphBuild assemble_graph(std::vector<std::string> dois,
                          std::vector<std::optional<int32_t>> years,
                          std::vector<std::pair<uint32_t, uint32_t>> edges,
                          GraphBuildReport report = {});

} // namespace bipdb
