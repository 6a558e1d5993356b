#include "bipdb/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "bipdb/errors.hpp"
#include "bipdb/numbers.hpp"
#include "bipdb/text_io.hpp"

namespace bipdb {

TopKRanking top_k(const ScoreVector& sv, uint32_t k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    TopKRanking out;
    out.measure = sv.measure;
    out.k = k;
    const auto n = static_cast<uint32_t>(sv.scores.size());
    const uint32_t take = std::min(k, n);
    std::vector<uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    const auto better = [&](uint32_t a, uint32_t b) {
        if (sv.scores[a] != sv.scores[b]) return sv.scores[a] > sv.scores[b];
        return a < b;
    };
    std::partial_sort(ids.begin(), ids.begin() + take, ids.end(), better);
    out.entries.assign(ids.begin(), ids.begin() + take);
    return out;
}

RhoMin rho_min(const TopKRanking& r1, const TopKRanking& r2) {
    if (r1.k != r2.k) throw std::invalid_argument("rankings use different k");
    if (r1.entries == r2.entries) return {1.0, false};

    // Rank of each union element in each list; absent elements all sit at
    // rank k + 1. Ranks are zero until assigned (real ranks start at 1).
    const double absent = static_cast<double>(r1.k) + 1.0;
    std::unordered_map<uint32_t, std::pair<double, double>> rank_index;
    rank_index.reserve(r1.entries.size() + r2.entries.size());
    for (size_t i = 0; i < r1.entries.size(); ++i)
        rank_index[r1.entries[i]].first = static_cast<double>(i + 1);
    for (size_t i = 0; i < r2.entries.size(); ++i)
        rank_index[r2.entries[i]].second = static_cast<double>(i + 1);

    // The sums run in ascending node-id order so that swapping the two
    // arguments reproduces the identical floating-point result.
    std::vector<std::pair<uint32_t, std::pair<double, double>>> ranks(rank_index.begin(),
                                                                      rank_index.end());
    std::sort(ranks.begin(), ranks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const double m = static_cast<double>(ranks.size());
    double sum1 = 0.0, sum2 = 0.0;
    for (auto& [id, r] : ranks) {
        if (r.first == 0.0) r.first = absent;
        if (r.second == 0.0) r.second = absent;
        sum1 += r.first;
        sum2 += r.second;
    }
    const double mean1 = sum1 / m;
    const double mean2 = sum2 / m;
    double cov = 0.0, var1 = 0.0, var2 = 0.0;
    for (const auto& [id, r] : ranks) {
        const double d1 = r.first - mean1;
        const double d2 = r.second - mean2;
        cov += d1 * d2;
        var1 += d1 * d1;
        var2 += d2 * d2;
    }
    if (var1 == 0.0 || var2 == 0.0) return {0.0, true};
    return {std::clamp(cov / std::sqrt(var1 * var2), -1.0, 1.0), false};
}

CorrelationMatrix correlation_matrix(const std::array<ScoreVector, 5>& vectors, uint32_t k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    for (const ScoreVector& sv : vectors) {
        if (sv.scores.size() != vectors[0].scores.size())
            throw std::invalid_argument("score vectors disagree on graph size");
    }
    CorrelationMatrix out;
    out.k = k;
    for (size_t i = 0; i < vectors.size(); ++i) out.measures[i] = vectors[i].measure;

    std::array<TopKRanking, 5> rankings;
    for (size_t i = 0; i < vectors.size(); ++i) rankings[i] = top_k(vectors[i], k);

    for (size_t i = 0; i < 5; ++i) {
        out.values[i][i] = 1.0;
        for (size_t j = i + 1; j < 5; ++j) {
            const RhoMin r = rho_min(rankings[i], rankings[j]);
            out.values[i][j] = out.values[j][i] = r.value;
            out.degenerate[i][j] = out.degenerate[j][i] = r.degenerate;
        }
    }
    return out;
}

void write_correlation_csv(const CorrelationMatrix& m, const std::filesystem::path& path) {
    TextWriter w(path, path.extension() == ".gz");
    std::string line = "measure";
    for (Measure mm : m.measures) {
        line += ',';
        line += measure_tag(mm);
    }
    line += '\n';
    w.write(line);
    for (size_t i = 0; i < 5; ++i) {
        line.assign(measure_tag(m.measures[i]));
        for (size_t j = 0; j < 5; ++j) {
            line += ',';
            line += format_double_shortest(m.values[i][j]);
        }
        line += '\n';
        w.write(line);
    }
    w.close();
}

std::string correlation_to_json(const CorrelationMatrix& m) {
    nlohmann::json j;
    j["k"] = m.k;
    auto tags = nlohmann::json::array();
    for (Measure mm : m.measures) tags.push_back(std::string(measure_tag(mm)));
    j["measures"] = tags;
    auto values = nlohmann::json::array();
    auto degenerate = nlohmann::json::array();
    for (size_t i = 0; i < 5; ++i) {
        values.push_back(std::vector<double>(m.values[i].begin(), m.values[i].end()));
        degenerate.push_back(std::vector<bool>(m.degenerate[i].begin(), m.degenerate[i].end()));
    }
    j["values"] = values;
    j["degenerate"] = degenerate;
    return j.dump(2) + "\n";
}

} // namespace bipdb
