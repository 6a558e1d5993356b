#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bipdb/graph.hpp"
#include "bipdb/measures.hpp"

namespace bipdb {

// Names and writes score dumps. A dump is a two-column TSV — DOI, then score
// — ordered by descending score (ties by ascending DOI) so the file doubles
// as a ranking. The filename carries the producing configuration:
//
//   name       = measure "_" graph-id { "_" param } ( ".tsv" | ".tsv.gz" )
//   measure    = "CC" | "iCC" | "PR" | "RAM" | "AttRank"
//   graph-id   = lowercase letters, digits and underscores
//   param      = key value, keys fixed per measure and always in order:
//                CC: none; iCC: y; PR: a, error; RAM: g, tc;
//                AttRank: a, b, g, rho, w, tc, error
//
// e.g. PR_uni1_a0.5_error1e-12.tsv.gz. Parameter values use the shortest
// round-trip decimal form; scores use 17 significant digits.
struct DumpSpec {
    Measure measure = Measure::CC;
    std::string graph_id; // must match [a-z0-9_]+
    MeasureParams params;
    bool compressed = true;
};

// Just the name, e.g. "PR_uni1_a0.5_error1e-12.tsv.gz". Throws
// std::invalid_argument on a malformed graph_id.
std::string dump_filename(const DumpSpec& spec);

// The (key, formatted value) pairs the filename carries for spec's measure,
// in filename order; empty for CC. Used to echo parameters in API metadata.
std::vector<std::pair<std::string, std::string>> dump_param_list(const DumpSpec& spec);

// Inverse of dump_filename over a path or bare name. Fields of `params` not
// named in the filename keep their defaults. Because parameter keys are
// fixed per measure, they are matched from the right and underscores in the
// graph id stay unambiguous. nullopt when the name does not fit the grammar.
std::optional<DumpSpec> parse_dump_filename(const std::filesystem::path& path);

// Writes sv to dir / dump_filename(spec) and returns that path.
// Throws std::invalid_argument when sv and g disagree on node count,
// IoError on write failure.
std::filesystem::path write_dump(const ScoreVector& sv, const CitationGraph& g,
                                 const DumpSpec& spec, const std::filesystem::path& dir);

struct DumpEntry {
    Doi doi;
    double score = 0.0;
};

// Rows in file order, scores exactly as written. Gzip and plain files are
// both accepted regardless of extension. Throws ParseError (with the line
// number) on anything but two tab-separated columns and a numeric score.
std::vector<DumpEntry> read_dump(const std::filesystem::path& path);

// Re-emits an existing dump into out_dir with the requested compression,
// preserving row order and exact score text; the filename keeps its encoded
// parameters and only the extension changes. Returns the new path. Throws
// ConsistencyError when the input name does not fit the dump grammar.
std::filesystem::path convert_dump(const std::filesystem::path& dump,
                                   const std::filesystem::path& out_dir, bool compressed);

} // namespace bipdb
