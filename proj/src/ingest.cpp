#include "bipdb/ingest.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "bipdb/errors.hpp"
#include "bipdb/numbers.hpp"
#include "bipdb/text_io.hpp"

namespace bipdb {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && static_cast<unsigned char>(s.front()) <= ' ') s.remove_prefix(1);
    while (!s.empty() && static_cast<unsigned char>(s.back()) <= ' ') s.remove_suffix(1);
    return s;
}

// The two schemas are strict two-field CSV, so a row splits at its single
// comma; fields are trimmed. nullopt when the comma count is off (which
// also rejects DOIs containing commas — documented limitation).
std::optional<std::pair<std::string_view, std::string_view>> split2(std::string_view line) {
    const size_t comma = line.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    if (line.find(',', comma + 1) != std::string_view::npos) return std::nullopt;
    return std::make_pair(trim(line.substr(0, comma)), trim(line.substr(comma + 1)));
}

void expect_header(TextReader& r, const std::filesystem::path& path, std::string_view want) {
    std::string line;
    if (!r.next_line(line))
        throw ParseError(path.string() + ": missing \"" + std::string(want) + "\" header", 1);
    std::string_view got = line;
    if (got.starts_with("\xEF\xBB\xBF")) got.remove_prefix(3); // UTF-8 BOM
    if (trim(got) != want)
        throw ParseError(path.string() + ": expected \"" + std::string(want) + "\" header", 1);
}

// Row-level consumer fed by scan_source. Rows arrive normalized and
// validated; self-loop detection and dedup accounting stay with the sink
// because parse_source and merge_sources store rows differently.
struct RowSink {
    virtual void record(std::string&& doi, std::optional<int32_t> year) = 0;
    virtual void edge(std::string&& citing, std::string&& cited) = 0;
    virtual ~RowSink() = default;
};

// Single scan path shared by parse_source and merge_sources: reads both
// files of one source, fills the row-level counters of `stats` and hands
// every well-formed row to the sink.
void scan_source(const SourceDescriptor& desc, SourceStats& stats, RowSink& sink) {
    stats.name = desc.name;
    {
        TextReader r(desc.metadata_path);
        expect_header(r, desc.metadata_path, "doi,year");
        std::string line;
        while (r.next_line(line)) {
            if (trim(line).empty()) continue;
            ++stats.metadata_rows;
            const auto cols = split2(line);
            if (!cols) {
                ++stats.malformed_doi;
                continue;
            }
            std::string doi = normalize_doi(cols->first);
            if (!is_valid_doi(doi)) {
                ++stats.malformed_doi;
                continue;
            }
            std::optional<int32_t> year;
            if (!cols->second.empty()) {
                const auto y = parse_int(cols->second);
                if (y && is_plausible_year(static_cast<int32_t>(*y)))
                    year = static_cast<int32_t>(*y);
            }
            if (!year) ++stats.missing_year; // empty, unparseable or implausible
            sink.record(std::move(doi), year);
        }
    }
    {
        TextReader r(desc.edges_path);
        expect_header(r, desc.edges_path, "citing,cited");
        std::string line;
        while (r.next_line(line)) {
            if (trim(line).empty()) continue;
            ++stats.edge_rows;
            const auto cols = split2(line);
            if (!cols) {
                ++stats.malformed_doi;
                continue;
            }
            std::string citing = normalize_doi(cols->first);
            std::string cited = normalize_doi(cols->second);
            if (!is_valid_doi(citing) || !is_valid_doi(cited)) {
                ++stats.malformed_doi;
                continue;
            }
            sink.edge(std::move(citing), std::move(cited));
        }
    }
}

uint64_t pack(uint32_t citing, uint32_t cited) {
    return (static_cast<uint64_t>(citing) << 32) | cited;
}

// Keeps every row for the ParsedSource contract while tracking the per-source
// distinct/duplicate counts on interned ids.
struct MaterializeSink final : RowSink {
    explicit MaterializeSink(ParsedSource& out) : out(out) {}

    ParsedSource& out;
    std::unordered_map<std::string, uint32_t> intern;
    std::unordered_set<uint32_t> meta_seen;
    std::unordered_set<uint64_t> edge_seen;

    uint32_t id(const std::string& doi) {
        return intern.try_emplace(doi, static_cast<uint32_t>(intern.size())).first->second;
    }
    void record(std::string&& doi, std::optional<int32_t> year) override {
        if (!meta_seen.insert(id(doi)).second) ++out.stats.duplicates;
        out.records.push_back({Doi{std::move(doi)}, year});
    }
    void edge(std::string&& citing, std::string&& cited) override {
        const uint32_t a = id(citing);
        const uint32_t b = id(cited);
        if (a == b) {
            ++out.stats.self_loops;
        } else if (!edge_seen.insert(pack(a, b)).second) {
            ++out.stats.duplicates;
        }
        out.edges.push_back({Doi{std::move(citing)}, Doi{std::move(cited)}});
    }
};

// Cross-source accumulation: one id per DOI, minimum year on conflict, one
// entry per distinct non-self-loop edge.
struct MergeState {
    std::unordered_map<std::string, uint32_t> intern; // DOI -> id
    std::vector<std::optional<int32_t>> years;        // by id
    std::unordered_set<uint64_t> edges;               // packed id pairs
};

struct MergeSink final : RowSink {
    MergeSink(MergeState& st, SourceStats& stats) : st(st), stats(stats) {}

    MergeState& st;
    SourceStats& stats;
    std::unordered_set<uint32_t> meta_seen;
    std::unordered_set<uint32_t> any_seen;
    std::unordered_set<uint64_t> edge_seen;

    uint32_t id(std::string&& doi) {
        const auto [it, fresh] =
            st.intern.try_emplace(std::move(doi), static_cast<uint32_t>(st.intern.size()));
        if (fresh) st.years.emplace_back();
        any_seen.insert(it->second);
        return it->second;
    }
    void record(std::string&& doi, std::optional<int32_t> year) override {
        const uint32_t i = id(std::move(doi));
        if (!meta_seen.insert(i).second) ++stats.duplicates;
        if (year) {
            auto& current = st.years[i];
            current = current ? std::min(*current, *year) : *year;
        }
    }
    void edge(std::string&& citing, std::string&& cited) override {
        const uint32_t a = id(std::move(citing));
        const uint32_t b = id(std::move(cited));
        if (a == b) {
            ++stats.self_loops;
            return;
        }
        const uint64_t key = pack(a, b);
        if (!edge_seen.insert(key).second) ++stats.duplicates;
        st.edges.insert(key);
    }
};

} // namespace

ParsedSource parse_source(const SourceDescriptor& desc) {
    ParsedSource out;
    MaterializeSink sink(out);
    scan_source(desc, out.stats, sink);
    out.stats.distinct_dois = sink.intern.size();
    out.stats.distinct_edges = sink.edge_seen.size();
    return out;
}

MergedCorpus merge_sources(const std::vector<SourceDescriptor>& sources) {
    if (sources.empty()) throw IngestError("no sources given");

    MergeState st;
    MergedCorpus out;
    for (const SourceDescriptor& desc : sources) {
        SourceStats stats;
        MergeSink sink(st, stats);
        scan_source(desc, stats, sink);
        stats.distinct_dois = sink.any_seen.size();
        stats.distinct_edges = sink.edge_seen.size();
        out.report.sources.push_back(std::move(stats));
    }
    if (st.intern.empty()) throw IngestError("no usable records in any source");

    // Records sorted by DOI; the interning order (and with it the source
    // order) leaves no trace in the output.
    const auto n = static_cast<uint32_t>(st.intern.size());
    std::vector<const std::string*> by_id(n);
    for (const auto& [doi, id] : st.intern) by_id[id] = &doi;
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return *by_id[a] < *by_id[b]; });

    std::vector<uint32_t> to_out(n);
    out.records.reserve(n);
    for (uint32_t idx = 0; idx < n; ++idx) {
        const uint32_t id = order[idx];
        to_out[id] = idx;
        out.records.push_back({Doi{*by_id[id]}, st.years[id]});
    }
    out.edges.reserve(st.edges.size());
    for (const uint64_t key : st.edges)
        out.edges.emplace_back(to_out[key >> 32], to_out[key & 0xffffffff]);
    std::sort(out.edges.begin(), out.edges.end());

    IngestReport& rep = out.report;
    rep.unified_distinct_dois = n;
    rep.unified_distinct_edges = out.edges.size();
    for (const PubRecord& r : out.records) {
        if (r.year) {
            ++rep.unified_records_with_year;
        } else {
            ++rep.unified_records_missing_year;
        }
    }
    return out;
}

void write_unified(const MergedCorpus& corpus, const std::filesystem::path& metadata_path,
                   const std::filesystem::path& edges_path) {
    {
        TextWriter w(metadata_path, metadata_path.extension() == ".gz");
        w.write("doi,year\n");
        std::string line;
        for (const PubRecord& r : corpus.records) {
            line.assign(r.doi.value);
            line += ',';
            if (r.year) line += std::to_string(*r.year);
            line += '\n';
            w.write(line);
        }
        w.close();
    }
    {
        TextWriter w(edges_path, edges_path.extension() == ".gz");
        w.write("citing,cited\n");
        std::string line;
        for (const auto& [citing, cited] : corpus.edges) {
            line.assign(corpus.records[citing].doi.value);
            line += ',';
            line += corpus.records[cited].doi.value;
            line += '\n';
            w.write(line);
        }
        w.close();
    }
}

GraphBuild build_graph(const MergedCorpus& corpus) {
    std::vector<std::string> dois;
    std::vector<std::optional<int32_t>> years;
    dois.reserve(corpus.records.size());
    years.reserve(corpus.records.size());
    for (const PubRecord& r : corpus.records) {
        dois.push_back(r.doi.value);
        years.push_back(r.year);
    }
    GraphBuildReport report;
    report.records_in = corpus.records.size();
    report.edges_in = corpus.edges.size();
    return assemble_graph(std::move(dois), std::move(years), corpus.edges, report);
}

std::string IngestReport::to_json() const {
    nlohmann::ordered_json j;
    j["sources"] = nlohmann::ordered_json::array();
    for (const SourceStats& s : sources) {
        j["sources"].push_back({{"name", s.name},
                                {"metadata_rows", s.metadata_rows},
                                {"edge_rows", s.edge_rows},
                                {"distinct_dois", s.distinct_dois},
                                {"distinct_edges", s.distinct_edges},
                                {"malformed_doi", s.malformed_doi},
                                {"missing_year", s.missing_year},
                                {"self_loops", s.self_loops},
                                {"duplicates", s.duplicates}});
    }
    j["unified"] = {{"distinct_dois", unified_distinct_dois},
                    {"distinct_edges", unified_distinct_edges},
                    {"records_with_year", unified_records_with_year},
                    {"records_missing_year", unified_records_missing_year}};
    return j.dump(2) + "\n";
}

} // namespace bipdb
