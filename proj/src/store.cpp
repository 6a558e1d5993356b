#include "bipdb/store.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <limits>
#include <vector>

#include "bipdb/errors.hpp"

namespace bipdb {

namespace {

std::string utc_now_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

ScoreStore ScoreStore::load(const std::array<std::filesystem::path, 5>& dumps) {
    ScoreStore store;
    store.loaded_at_ = utc_now_iso8601();

    // Identify each dump by its filename and demand one per measure.
    std::array<const std::filesystem::path*, 5> by_measure{};
    for (const std::filesystem::path& path : dumps) {
        const auto spec = parse_dump_filename(path);
        if (!spec)
            throw ConsistencyError("not a recognizable dump name: " + path.string());
        const auto slot = static_cast<size_t>(spec->measure);
        if (by_measure[slot])
            throw ConsistencyError("two dumps for " + std::string(measure_tag(spec->measure)) +
                                   ": " + by_measure[slot]->string() + " and " + path.string());
        by_measure[slot] = &path;
        store.specs_[slot] = *spec;
        store.names_[slot] = path.filename().string();
        if (store.graph_id_.empty()) {
            store.graph_id_ = spec->graph_id;
        } else if (store.graph_id_ != spec->graph_id) {
            throw ConsistencyError("dumps come from different graphs: \"" + store.graph_id_ +
                                   "\" vs \"" + spec->graph_id + "\" (" + path.string() + ")");
        }
    }
    for (size_t m = 0; m < 5; ++m) {
        if (!by_measure[m])
            throw ConsistencyError("no dump for " +
                                   std::string(measure_tag(kAllMeasures[m])));
    }

    // Join on DOI. A NaN slot after filling a dump marks a DOI the dump did
    // not cover.
    constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    for (size_t m = 0; m < 5; ++m) {
        const std::filesystem::path& path = *by_measure[m];
        for (DumpEntry& entry : read_dump(path)) {
            auto [it, fresh] = store.scores_.try_emplace(std::move(entry.doi.value));
            if (fresh) it->second.fill(kUnset);
            if (m == 0 && !fresh)
                throw ConsistencyError("duplicate DOI \"" + it->first + "\" in " + path.string());
            if (m > 0) {
                if (fresh)
                    throw ConsistencyError("DOI \"" + it->first + "\" missing from " +
                                           by_measure[0]->string());
                if (!std::isnan(it->second[m]))
                    throw ConsistencyError("duplicate DOI \"" + it->first + "\" in " +
                                           path.string());
            }
            it->second[m] = entry.score;
        }
        for (const auto& [doi, row] : store.scores_) {
            if (std::isnan(row[m]))
                throw ConsistencyError("DOI \"" + doi + "\" missing from " + path.string());
        }
    }
    return store;
}

std::optional<std::array<double, 5>> ScoreStore::get(std::string_view raw_doi) const {
    const auto it = scores_.find(normalize_doi(raw_doi));
    if (it == scores_.end()) return std::nullopt;
    return it->second;
}

CorrelationMatrix correlate_dumps(const std::array<std::filesystem::path, 5>& dumps, uint32_t k) {
    const ScoreStore store = ScoreStore::load(dumps);

    // Rebuild dense score vectors over ids assigned in ascending DOI order —
    // the same id order the dumps were written from.
    std::vector<const std::string*> dois;
    dois.reserve(store.size());
    for (const auto& [doi, row] : store.rows()) dois.push_back(&doi);
    std::sort(dois.begin(), dois.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });

    std::array<ScoreVector, 5> vectors;
    for (size_t m = 0; m < 5; ++m) {
        vectors[m].measure = kAllMeasures[m];
        vectors[m].params = store.dump_specs()[m].params;
        vectors[m].scores.resize(dois.size());
    }
    for (size_t i = 0; i < dois.size(); ++i) {
        const std::array<double, 5>& row = store.rows().at(*dois[i]);
        for (size_t m = 0; m < 5; ++m) vectors[m].scores[i] = row[m];
    }
    return correlation_matrix(vectors, k);
}

} // namespace bipdb
