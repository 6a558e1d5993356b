#include "bipdb/measures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bipdb/parallel.hpp"

namespace bipdb {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

[[noreturn]] void bad_param(const char* name, const char* requirement, double got) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s must %s (got %g)", name, requirement, got);
    throw std::invalid_argument(buf);
}

uint64_t chunk_count(uint64_t n) { return n == 0 ? 0 : (n - 1) / kDefaultChunk + 1; }

// Per-chunk partials summed in chunk order: the total is independent of how
// chunks were distributed over workers.
double reduce(const std::vector<double>& partials, uint64_t chunks) {
    double total = 0.0;
    for (uint64_t c = 0; c < chunks; ++c) total += partials[c];
    return total;
}

} // namespace

std::string_view measure_tag(Measure m) {
    switch (m) {
    case Measure::CC: return "CC";
    case Measure::ICC: return "iCC";
    case Measure::PR: return "PR";
    case Measure::RAM: return "RAM";
    case Measure::AttRank: return "AttRank";
    }
    throw std::invalid_argument("unknown measure");
}

std::string_view measure_key(Measure m) {
    switch (m) {
    case Measure::CC: return "cc";
    case Measure::ICC: return "icc";
    case Measure::PR: return "pagerank";
    case Measure::RAM: return "ram";
    case Measure::AttRank: return "attrank";
    }
    throw std::invalid_argument("unknown measure");
}

std::optional<Measure> parse_measure(std::string_view text) {
    const std::string t = lower(text);
    for (Measure m : kAllMeasures) {
        if (t == lower(measure_tag(m)) || t == measure_key(m)) return m;
    }
    return std::nullopt;
}

void validate_params(const MeasureParams& p, Measure m) {
    // Comparisons are written so that NaN fails them.
    switch (m) {
    case Measure::CC:
        break;
    case Measure::ICC:
        if (p.icc_window < 1) bad_param("icc_window", "be at least 1", p.icc_window);
        break;
    case Measure::PR:
        if (!(p.pr_alpha >= 0.0 && p.pr_alpha <= 1.0))
            bad_param("pr_alpha", "lie in [0, 1]", p.pr_alpha);
        if (!(p.pr_epsilon > 0.0)) bad_param("pr_epsilon", "be positive", p.pr_epsilon);
        if (p.max_iterations < 1) bad_param("max_iterations", "be at least 1", p.max_iterations);
        break;
    case Measure::RAM:
        if (!(p.ram_gamma > 0.0 && p.ram_gamma < 1.0))
            bad_param("ram_gamma", "lie in (0, 1)", p.ram_gamma);
        break;
    case Measure::AttRank:
        if (!(p.att_alpha >= 0.0 && p.att_alpha < 1.0))
            bad_param("att_alpha", "lie in [0, 1)", p.att_alpha);
        if (!(p.att_beta >= 0.0 && p.att_beta <= 1.0))
            bad_param("att_beta", "lie in [0, 1]", p.att_beta);
        if (!(p.att_gamma >= 0.0 && p.att_gamma <= 1.0))
            bad_param("att_gamma", "lie in [0, 1]", p.att_gamma);
        if (!(std::abs(p.att_alpha + p.att_beta + p.att_gamma - 1.0) <= 1e-12))
            bad_param("att_alpha + att_beta + att_gamma", "sum to 1",
                      p.att_alpha + p.att_beta + p.att_gamma);
        if (!(p.att_rho > 0.0)) bad_param("att_rho", "be positive", p.att_rho);
        if (p.resolved_att_window() < 1)
            bad_param("att_window", "be at least 1", p.resolved_att_window());
        if (!(p.pr_epsilon > 0.0)) bad_param("pr_epsilon", "be positive", p.pr_epsilon);
        if (p.max_iterations < 1) bad_param("max_iterations", "be at least 1", p.max_iterations);
        break;
    }
}

void validate_params(const MeasureParams& p) {
    for (Measure m : kAllMeasures) validate_params(p, m);
}

ScoreVector citation_count(const CitationGraph& g) {
    ScoreVector out;
    out.measure = Measure::CC;
    const uint32_t n = g.node_count();
    out.scores.resize(n);
    for (uint32_t i = 0; i < n; ++i) out.scores[i] = g.in_degree(i);
    return out;
}

ScoreVector incubation_citation_count(const CitationGraph& g, const MeasureParams& p) {
    validate_params(p, Measure::ICC);
    ScoreVector out;
    out.measure = Measure::ICC;
    out.params = p;
    const uint32_t n = g.node_count();
    out.scores.assign(n, 0.0);
    for_each_chunk(n, kDefaultChunk, p.workers, [&](size_t, uint64_t begin, uint64_t end) {
        for (uint64_t i = begin; i < end; ++i) {
            const auto id = static_cast<uint32_t>(i);
            // int64 keeps the boundary arithmetic overflow-free.
            const int64_t cutoff = static_cast<int64_t>(g.year(id)) + p.icc_window;
            double count = 0.0;
            for (uint32_t j : g.in_neighbors(id)) {
                if (g.year(j) <= cutoff) count += 1.0;
            }
            out.scores[i] = count;
        }
    });
    return out;
}

ScoreVector ram(const CitationGraph& g, const MeasureParams& p) {
    validate_params(p, Measure::RAM);
    ScoreVector out;
    out.measure = Measure::RAM;
    out.params = p;
    const uint32_t n = g.node_count();
    out.scores.assign(n, 0.0);
    if (n == 0) return out;

    // gamma^age lookup for every age the graph can produce; one std::pow per
    // distinct age keeps the per-edge cost at an indexed load.
    const int64_t max_age = std::max<int64_t>(
        0, static_cast<int64_t>(p.current_year) - g.min_year());
    std::vector<double> decay(static_cast<size_t>(max_age) + 1);
    for (int64_t a = 0; a <= max_age; ++a)
        decay[static_cast<size_t>(a)] = std::pow(p.ram_gamma, static_cast<double>(a));

    const uint64_t chunks = chunk_count(n);
    std::vector<uint64_t> future(chunks, 0);
    for_each_chunk(n, kDefaultChunk, p.workers, [&](size_t c, uint64_t begin, uint64_t end) {
        uint64_t clamped = 0;
        for (uint64_t i = begin; i < end; ++i) {
            double sum = 0.0;
            for (uint32_t j : g.in_neighbors(static_cast<uint32_t>(i))) {
                const int64_t age = static_cast<int64_t>(p.current_year) - g.year(j);
                if (age < 0) {
                    sum += 1.0; // future-dated citing paper: cap at gamma^0
                    ++clamped;
                } else {
                    sum += decay[static_cast<size_t>(age)];
                }
            }
            out.scores[i] = sum;
        }
        future[c] += clamped;
    });
    for (uint64_t c = 0; c < chunks; ++c) out.future_dated += future[c];
    return out;
}

std::vector<double> attention_score(const CitationGraph& g, const MeasureParams& p) {
    if (p.resolved_att_window() < 1)
        bad_param("att_window", "be at least 1", p.resolved_att_window());
    const uint32_t n = g.node_count();
    std::vector<double> att(n, 0.0);
    if (n == 0) return att;
    const int64_t window_start =
        static_cast<int64_t>(p.current_year) - p.resolved_att_window() + 1;

    const uint64_t chunks = chunk_count(n);
    std::vector<double> partials(chunks, 0.0);
    for_each_chunk(n, kDefaultChunk, p.workers, [&](size_t c, uint64_t begin, uint64_t end) {
        double local = 0.0;
        for (uint64_t i = begin; i < end; ++i) {
            double count = 0.0;
            for (uint32_t j : g.in_neighbors(static_cast<uint32_t>(i))) {
                if (g.year(j) >= window_start) count += 1.0;
            }
            att[i] = count;
            local += count;
        }
        partials[c] = local;
    });
    const double total = reduce(partials, chunks);
    if (total == 0.0) return att; // no recent citations anywhere: all zeros
    for (uint32_t i = 0; i < n; ++i) att[i] /= total;
    return att;
}

namespace {

// Shared power-iteration driver for the PageRank family:
//   next_i = alpha * (sum over citing j of s_j / out_degree(j)
//            + dangling_mass / n) + base_i
// Dangling mass is re-spread uniformly every step, keeping the total at 1.
// All reductions run over fixed 8K-node chunks combined in chunk order, so
// the result is bitwise identical for any worker count.
ScoreVector power_iterate(const CitationGraph& g, const MeasureParams& p, Measure m,
                          double alpha, const std::vector<double>& base,
                          const std::vector<double>* start) {
    ScoreVector out;
    out.measure = m;
    out.params = p;
    const uint32_t n = g.node_count();
    if (n == 0) return out;
    if (start && start->size() != n)
        throw std::invalid_argument("start vector length does not match the graph");

    std::vector<double> inv_out(n, 0.0);
    std::vector<uint32_t> dangling;
    for (uint32_t i = 0; i < n; ++i) {
        if (const auto w = g.transition_column_weight(i)) {
            inv_out[i] = *w;
        } else {
            dangling.push_back(i);
        }
    }

    std::vector<double> s = start ? *start : std::vector<double>(n, 1.0 / n);
    std::vector<double> next(n);
    const uint64_t node_chunks = chunk_count(n);
    const uint64_t dangling_chunks = chunk_count(dangling.size());
    std::vector<double> partials(std::max(node_chunks, dangling_chunks), 0.0);

    out.converged = false;
    for (int32_t iter = 1; iter <= p.max_iterations; ++iter) {
        double dangling_mass = 0.0;
        if (!dangling.empty()) {
            for_each_chunk(dangling.size(), kDefaultChunk, p.workers,
                           [&](size_t c, uint64_t begin, uint64_t end) {
                               double local = 0.0;
                               for (uint64_t k = begin; k < end; ++k) local += s[dangling[k]];
                               partials[c] = local;
                           });
            dangling_mass = reduce(partials, dangling_chunks);
        }
        const double dangling_term = dangling_mass / n;

        for_each_chunk(n, kDefaultChunk, p.workers,
                       [&](size_t c, uint64_t begin, uint64_t end) {
                           double diff = 0.0;
                           for (uint64_t i = begin; i < end; ++i) {
                               double acc = 0.0;
                               for (uint32_t j : g.in_neighbors(static_cast<uint32_t>(i)))
                                   acc += s[j] * inv_out[j];
                               const double v = alpha * (acc + dangling_term) + base[i];
                               diff += std::abs(v - s[i]);
                               next[i] = v;
                           }
                           partials[c] = diff;
                       });
        const double l1_change = reduce(partials, node_chunks);
        s.swap(next);
        out.iterations_run = iter;
        if (l1_change <= p.pr_epsilon) {
            out.converged = true;
            break;
        }
    }
    out.scores = std::move(s);
    return out;
}

} // namespace

ScoreVector pagerank(const CitationGraph& g, const MeasureParams& p,
                     const std::vector<double>* start) {
    validate_params(p, Measure::PR);
    const uint32_t n = g.node_count();
    const std::vector<double> base(n, n ? (1.0 - p.pr_alpha) / n : 0.0);
    return power_iterate(g, p, Measure::PR, p.pr_alpha, base, start);
}

ScoreVector attrank(const CitationGraph& g, const MeasureParams& p,
                    const std::vector<double>* start) {
    validate_params(p, Measure::AttRank);
    const uint32_t n = g.node_count();
    if (n == 0) return power_iterate(g, p, Measure::AttRank, p.att_alpha, {}, start);

    const std::vector<double> att = attention_score(g, p);
    const bool window_empty =
        std::all_of(att.begin(), att.end(), [](double a) { return a == 0.0; });
    // With no recent citations Att carries no mass; hand its weight to the
    // age prior so the three teleport terms still sum to 1 - alpha.
    const double beta = window_empty ? 0.0 : p.att_beta;
    const double gamma = window_empty ? p.att_beta + p.att_gamma : p.att_gamma;

    // Exponential age prior, normalized to sum 1. Publications dated after
    // current_year count as age 0 rather than receiving weight above 1.
    std::vector<double> base(n);
    uint64_t future = 0;
    double prior_sum = 0.0;
    for (uint32_t i = 0; i < n; ++i) {
        int64_t age = static_cast<int64_t>(p.current_year) - g.year(i);
        if (age < 0) {
            age = 0;
            ++future;
        }
        base[i] = std::exp(-p.att_rho * static_cast<double>(age));
        prior_sum += base[i];
    }
    for (uint32_t i = 0; i < n; ++i)
        base[i] = beta * att[i] + gamma * (base[i] / prior_sum);

    ScoreVector out = power_iterate(g, p, Measure::AttRank, p.att_alpha, base, start);
    out.future_dated = future;
    return out;
}

ScoreVector compute(const CitationGraph& g, const MeasureParams& p, Measure m) {
    switch (m) {
    case Measure::CC: {
        ScoreVector out = citation_count(g);
        out.params = p;
        return out;
    }
    case Measure::ICC: return incubation_citation_count(g, p);
    case Measure::PR: return pagerank(g, p);
    case Measure::RAM: return ram(g, p);
    case Measure::AttRank: return attrank(g, p);
    }
    throw std::invalid_argument("unknown measure");
}

std::array<ScoreVector, 5> compute_all(const CitationGraph& g, const MeasureParams& p) {
    validate_params(p);
    return {compute(g, p, Measure::CC), compute(g, p, Measure::ICC),
            compute(g, p, Measure::PR), compute(g, p, Measure::RAM),
            compute(g, p, Measure::AttRank)};
}

} // namespace bipdb
