#include "bipdb/graph.hpp"

#include <algorithm>
#include <ctime>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace bipdb {

int32_t current_utc_year() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    return static_cast<int32_t>(tm.tm_year + 1900);
}

bool is_plausible_year(int32_t year) {
    static const int32_t upper = current_utc_year() + 2;
    return year >= 1000 && year <= upper;
}

uint32_t CitationGraph::check(uint32_t id) const {
    if (id >= dois_.size()) {
        throw std::out_of_range("node id " + std::to_string(id) + " out of range (n=" +
                                std::to_string(dois_.size()) + ")");
    }
    return id;
}

std::optional<uint32_t> CitationGraph::find(std::string_view normalized_doi) const {
    auto it = id_index_.find(std::string(normalized_doi));
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

std::span<const uint32_t> CitationGraph::in_neighbors(uint32_t id) const {
    check(id);
    const uint64_t begin = in_offsets_[id];
    const uint64_t end = in_offsets_[id + 1];
    return {in_edges_.data() + begin, static_cast<size_t>(end - begin)};
}

std::optional<double> CitationGraph::transition_column_weight(uint32_t id) const {
    const uint32_t d = out_degree_[check(id)];
    if (d == 0) return std::nullopt;
    return 1.0 / static_cast<double>(d);
}

bool CitationGraph::operator==(const CitationGraph& other) const {
    return dois_ == other.dois_ && years_ == other.years_ && in_offsets_ == other.in_offsets_ &&
           in_edges_ == other.in_edges_ && out_degree_ == other.out_degree_;
}

// Shared final stage: sort nodes by DOI, remap edges, build the in-edge CSR.
class GraphAssembler {
public:
    static GraphBuild run(std::vector<std::string> dois, std::vector<std::optional<int32_t>> years,
                          std::vector<std::pair<uint32_t, uint32_t>> edges,
                          GraphBuildReport report) {
        if (dois.size() != years.size()) {
            throw std::invalid_argument("assemble_graph: dois/years size mismatch");
        }

        // keep only records with a plausible year
        const size_t total = dois.size();
        std::vector<uint32_t> kept;
        kept.reserve(total);
        for (size_t i = 0; i < total; ++i) {
            if (years[i].has_value() && is_plausible_year(*years[i])) {
                kept.push_back(static_cast<uint32_t>(i));
            } else {
                ++report.records_missing_year;
            }
        }

        std::sort(kept.begin(), kept.end(), [&](uint32_t a, uint32_t b) { return dois[a] < dois[b]; });

        constexpr uint32_t kDropped = UINT32_MAX;
        std::vector<uint32_t> remap(total, kDropped);
        CitationGraph g;
        g.dois_.reserve(kept.size());
        g.years_.reserve(kept.size());
        for (uint32_t new_id = 0; new_id < kept.size(); ++new_id) {
            const uint32_t old_id = kept[new_id];
            remap[old_id] = new_id;
            g.dois_.push_back(std::move(dois[old_id]));
            g.years_.push_back(*years[old_id]);
        }

        const uint32_t n = static_cast<uint32_t>(g.dois_.size());
        g.id_index_.reserve(n);
        for (uint32_t id = 0; id < n; ++id) g.id_index_.emplace(g.dois_[id], id);
        if (n > 0) {
            auto [lo, hi] = std::minmax_element(g.years_.begin(), g.years_.end());
            g.min_year_ = *lo;
            g.max_year_ = *hi;
        }

        // remap edges; pack as (cited << 32 | citing) so one sort yields the
        // CSR fill order with ascending citing ids per node
        std::vector<uint64_t> packed;
        packed.reserve(edges.size());
        g.out_degree_.assign(n, 0);
        for (const auto& [citing, cited] : edges) {
            if (citing >= total || cited >= total) {
                throw std::invalid_argument("assemble_graph: edge index out of range");
            }
            const uint32_t a = remap[citing];
            const uint32_t b = remap[cited];
            if (a == kDropped || b == kDropped) {
                ++report.missing_year_endpoint;
                continue;
            }
            packed.push_back((static_cast<uint64_t>(b) << 32) | a);
        }
        edges.clear();
        edges.shrink_to_fit();
        std::sort(packed.begin(), packed.end());

        g.in_offsets_.assign(n + 1, 0);
        g.in_edges_.resize(packed.size());
        for (size_t i = 0; i < packed.size(); ++i) {
            const uint32_t cited = static_cast<uint32_t>(packed[i] >> 32);
            const uint32_t citing = static_cast<uint32_t>(packed[i]);
            g.in_offsets_[cited + 1]++;
            g.in_edges_[i] = citing;
            g.out_degree_[citing]++;
        }
        for (uint32_t i = 0; i < n; ++i) g.in_offsets_[i + 1] += g.in_offsets_[i];

        return GraphBuild{std::move(g), report};
    }
};

GraphBuild assemble_graph(std::vector<std::string> dois, std::vector<std::optional<int32_t>> years,
                          std::vector<std::pair<uint32_t, uint32_t>> edges,
                          GraphBuildReport report) {
    return GraphAssembler::run(std::move(dois), std::move(years), std::move(edges),
                               std::move(report));
}

GraphBuild build_graph(const std::vector<PubRecord>& records,
                       const std::vector<CitationEdge>& edges) {
    GraphBuildReport report;
    report.records_in = records.size();
    report.edges_in = edges.size();

    std::vector<std::string> dois;
    std::vector<std::optional<int32_t>> years;
    std::unordered_map<std::string, uint32_t> index;
    index.reserve(records.size());

    for (const PubRecord& r : records) {
        std::string doi = normalize_doi(r.doi.value);
        if (!is_valid_doi(doi)) {
            ++report.malformed_record_dois;
            continue;
        }
        std::optional<int32_t> year = r.year;
        if (year && !is_plausible_year(*year)) year.reset();

        auto [it, inserted] = index.emplace(std::move(doi), static_cast<uint32_t>(dois.size()));
        if (inserted) {
            dois.push_back(it->first);
            years.push_back(year);
        } else {
            ++report.duplicate_records;
            // minimum-year rule on conflicts
            auto& stored = years[it->second];
            if (year && (!stored || *year < *stored)) stored = year;
        }
    }

    std::vector<std::pair<uint32_t, uint32_t>> id_edges;
    id_edges.reserve(edges.size());
    std::unordered_set<uint64_t> seen;
    seen.reserve(edges.size());

    for (const CitationEdge& e : edges) {
        const std::string citing = normalize_doi(e.citing.value);
        const std::string cited = normalize_doi(e.cited.value);
        if (!is_valid_doi(citing) || !is_valid_doi(cited)) {
            ++report.malformed_edge_dois;
            continue;
        }
        if (citing == cited) {
            ++report.self_loops;
            continue;
        }
        const auto citing_it = index.find(citing);
        if (citing_it == index.end()) {
            ++report.unknown_endpoint;
            continue;
        }
        const auto cited_it = index.find(cited);
        if (cited_it == index.end()) {
            ++report.unknown_endpoint;
            continue;
        }
        const uint64_t key =
            (static_cast<uint64_t>(citing_it->second) << 32) | cited_it->second;
        if (!seen.insert(key).second) {
            ++report.duplicate_edges;
            continue;
        }
        id_edges.emplace_back(citing_it->second, cited_it->second);
    }

    return assemble_graph(std::move(dois), std::move(years), std::move(id_edges),
                          std::move(report));
}

std::string GraphBuildReport::to_json() const {
    const nlohmann::ordered_json j = {{"records_in", records_in},
                                      {"edges_in", edges_in},
                                      {"malformed_record_dois", malformed_record_dois},
                                      {"duplicate_records", duplicate_records},
                                      {"records_missing_year", records_missing_year},
                                      {"malformed_edge_dois", malformed_edge_dois},
                                      {"self_loops", self_loops},
                                      {"unknown_endpoint", unknown_endpoint},
                                      {"missing_year_endpoint", missing_year_endpoint},
                                      {"duplicate_edges", duplicate_edges},
                                      {"skipped_edges", skipped_edges()}};
    return j.dump(2) + "\n";
}

} // namespace bipdb
