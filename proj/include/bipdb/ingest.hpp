#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bipdb/graph.hpp"

namespace bipdb {

// One citation source: a metadata CSV ("doi,year", empty year allowed) and an
// edge CSV ("citing,cited"). Either file may be gzip-compressed.
struct SourceDescriptor {
    std::string name;
    std::filesystem::path metadata_path;
    std::filesystem::path edges_path;
};

struct SourceStats {
    std::string name;
    uint64_t metadata_rows = 0;
    uint64_t edge_rows = 0;
    uint64_t distinct_dois = 0;  // valid DOIs seen in either file
    uint64_t distinct_edges = 0; // excluding self-loops
    uint64_t malformed_doi = 0;  // rows dropped for an unparseable DOI or column count
    uint64_t missing_year = 0;   // metadata rows with an empty or unusable year
    uint64_t self_loops = 0;
    uint64_t duplicates = 0;     // rows repeating a record or edge within this source
};

struct IngestReport {
    std::vector<SourceStats> sources;
    uint64_t unified_distinct_dois = 0;
    uint64_t unified_distinct_edges = 0;
    uint64_t unified_records_with_year = 0;
    uint64_t unified_records_missing_year = 0;

    std::string to_json() const; // pretty-printed, stable key order
};

struct ParsedSource {
    std::vector<PubRecord> records;   // normalized; year-less rows kept
    std::vector<CitationEdge> edges;  // normalized; self-loops and duplicates kept
    SourceStats stats;
};

// Reads one source. Rows with a malformed DOI or wrong column count are
// skipped and counted; rows with an unusable year are emitted year-less.
// Throws IoError when a file cannot be read, ParseError on a bad header.
ParsedSource parse_source(const SourceDescriptor& desc);

// Union of the sources: records deduplicated by DOI (minimum year wins on
// conflict), edges deduplicated with self-loops removed. Both outputs are
// sorted, so the result is independent of source order. `edges` holds index
// pairs into `records`.
struct MergedCorpus {
    std::vector<PubRecord> records;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    IngestReport report;
};

// Throws IngestError when no source yields a usable record.
MergedCorpus merge_sources(const std::vector<SourceDescriptor>& sources);

// Writes the unified corpus back out in source format; re-ingesting these
// files is a fixed point of merge_sources.
void write_unified(const MergedCorpus& corpus, const std::filesystem::path& metadata_path,
                   const std::filesystem::path& edges_path);

GraphBuild build_graph(const MergedCorpus& corpus);

} // namespace bipdb
