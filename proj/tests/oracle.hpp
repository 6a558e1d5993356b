#pragma once
// Dense, brute-force reference implementations used to validate the engine's
// sparse kernels, plus small shared test utilities. Everything here is
// written directly from the score definitions over an explicit edge list;
// nothing reuses the library's graph representation or reduction order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace oracle {

// mt19937 raw draws are pinned by the standard; std::*_distribution outputs
// are not, so all randomness below derives from raw draws only.
inline uint32_t draw(std::mt19937& rng, uint32_t bound) {
    return bound == 0 ? 0 : rng() % bound;
}
inline double draw_unit(std::mt19937& rng) {
    return (rng() >> 5) * 0x1p-27; // [0, 1)
}

struct Graph {
    int n = 0;
    std::vector<int> year;                  // publication year per node
    std::vector<std::pair<int, int>> edges; // (citing, cited); unique, no loops
};

// Random graph with a controllable share of dangling (reference-free) nodes.
inline Graph random_graph(uint32_t seed, int max_n, int year_lo, int year_hi,
                          double dangling_share = 0.25, int max_out = 5) {
    std::mt19937 rng(seed);
    Graph g;
    g.n = 2 + static_cast<int>(draw(rng, static_cast<uint32_t>(max_n - 1)));
    g.year.resize(g.n);
    const uint32_t span = static_cast<uint32_t>(year_hi - year_lo + 1);
    for (int i = 0; i < g.n; ++i) g.year[i] = year_lo + static_cast<int>(draw(rng, span));

    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < g.n; ++i) {
        if (draw_unit(rng) < dangling_share) continue;
        const int out = 1 + static_cast<int>(draw(rng, static_cast<uint32_t>(max_out)));
        for (int r = 0; r < out; ++r) {
            const int target = static_cast<int>(draw(rng, static_cast<uint32_t>(g.n)));
            if (target == i) continue;
            if (seen.insert({i, target}).second) g.edges.push_back({i, target});
        }
    }
    return g;
}

// DOI whose lexicographic order equals the node-index order.
inline std::string doi_of(int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "10.9999/n%06d", i);
    return buf;
}

// ------------------------------------------------------------------ scores

inline std::vector<double> cc(const Graph& g) {
    std::vector<double> s(g.n, 0.0);
    for (const auto& [citing, cited] : g.edges) s[cited] += 1.0;
    return s;
}

inline std::vector<double> icc(const Graph& g, int window) {
    std::vector<double> s(g.n, 0.0);
    for (const auto& [citing, cited] : g.edges)
        if (g.year[citing] <= g.year[cited] + window) s[cited] += 1.0;
    return s;
}

inline std::vector<double> ram(const Graph& g, double gamma, int current_year) {
    std::vector<double> s(g.n, 0.0);
    for (const auto& [citing, cited] : g.edges) {
        const int age = std::max(0, current_year - g.year[citing]);
        s[cited] += std::pow(gamma, age);
    }
    return s;
}

// Share of all citations whose citing paper falls in the most recent
// `window` years (current_year - window + 1 .. current_year and later).
inline std::vector<double> attention(const Graph& g, int window, int current_year) {
    std::vector<double> s(g.n, 0.0);
    double total = 0.0;
    for (const auto& [citing, cited] : g.edges) {
        if (g.year[citing] >= current_year - window + 1) {
            s[cited] += 1.0;
            total += 1.0;
        }
    }
    if (total > 0.0)
        for (double& v : s) v /= total;
    return s;
}

inline std::vector<double> pagerank(const Graph& g, double alpha, double eps,
                                    int max_iterations) {
    const int n = g.n;
    std::vector<double> s(n, 1.0 / n), next(n);
    std::vector<int> outdeg(n, 0);
    for (const auto& [citing, cited] : g.edges) outdeg[citing]++;
    for (int iter = 0; iter < max_iterations; ++iter) {
        double dangling = 0.0;
        for (int i = 0; i < n; ++i)
            if (outdeg[i] == 0) dangling += s[i];
        std::fill(next.begin(), next.end(),
                  (1.0 - alpha) / n + alpha * dangling / n);
        for (const auto& [citing, cited] : g.edges)
            next[cited] += alpha * s[citing] / outdeg[citing];
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff += std::abs(next[i] - s[i]);
        s.swap(next);
        if (diff <= eps) break;
    }
    return s;
}

inline std::vector<double> attrank(const Graph& g, double alpha, double beta,
                                   double gamma, double rho, int window,
                                   int current_year, double eps, int max_iterations) {
    const int n = g.n;
    const std::vector<double> att = attention(g, window, current_year);
    bool any_recent = false;
    for (double v : att) any_recent = any_recent || v > 0.0;
    double beta_eff = beta, gamma_eff = gamma;
    if (!any_recent) { // no recent citations: attention mass joins the prior
        beta_eff = 0.0;
        gamma_eff = beta + gamma;
    }
    std::vector<double> prior(n);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        const int age = std::max(0, current_year - g.year[i]);
        prior[i] = std::exp(-rho * age);
        norm += prior[i];
    }
    std::vector<double> base(n);
    for (int i = 0; i < n; ++i)
        base[i] = beta_eff * att[i] + gamma_eff * prior[i] / norm;

    std::vector<double> s(n, 1.0 / n), next(n);
    std::vector<int> outdeg(n, 0);
    for (const auto& [citing, cited] : g.edges) outdeg[citing]++;
    for (int iter = 0; iter < max_iterations; ++iter) {
        double dangling = 0.0;
        for (int i = 0; i < n; ++i)
            if (outdeg[i] == 0) dangling += s[i];
        for (int i = 0; i < n; ++i) next[i] = alpha * dangling / n + base[i];
        for (const auto& [citing, cited] : g.edges)
            next[cited] += alpha * s[citing] / outdeg[citing];
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff += std::abs(next[i] - s[i]);
        s.swap(next);
        if (diff <= eps) break;
    }
    return s;
}

// --------------------------------------------------------- rank correlation

// Top-k ranking: ids of the k highest scores, ties broken by ascending id.
inline std::vector<int> top_k_ids(const std::vector<double>& scores, int k) {
    std::vector<int> ids(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) ids[i] = static_cast<int>(i);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    if (static_cast<int>(ids.size()) > k) ids.resize(k);
    return ids;
}

// Spearman over the union of two top-k lists, absent entries at rank k+1.
inline double rho_min(const std::vector<double>& s1, const std::vector<double>& s2,
                      int k, bool* degenerate = nullptr) {
    const std::vector<int> t1 = top_k_ids(s1, k);
    const std::vector<int> t2 = top_k_ids(s2, k);
    std::unordered_map<int, std::pair<double, double>> ranks;
    for (size_t r = 0; r < t1.size(); ++r) ranks[t1[r]].first = double(r + 1);
    for (size_t r = 0; r < t2.size(); ++r) ranks[t2[r]].second = double(r + 1);
    std::vector<std::pair<double, double>> xy;
    for (auto& [id, pr] : ranks) {
        if (pr.first == 0.0) pr.first = double(k + 1);
        if (pr.second == 0.0) pr.second = double(k + 1);
        xy.push_back(pr);
    }
    const double m = double(xy.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : xy) { mean_x += x; mean_y += y; }
    mean_x /= m;
    mean_y /= m;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& [x, y] : xy) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
        syy += (y - mean_y) * (y - mean_y);
    }
    if (degenerate) *degenerate = false;
    if (sxx == 0.0 || syy == 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ------------------------------------------------------------------- files

// Self-deleting scratch directory under the system temp root.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("bipdb_test_" + tag + "_" + std::to_string(++counter) + "_" +
                std::to_string(static_cast<unsigned>(std::random_device{}())));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace oracle
