#include "bipdb.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bipdb/correlation.hpp"
#include "bipdb/errors.hpp"
#include "bipdb/export.hpp"
#include "bipdb/graph.hpp"
#include "bipdb/ingest.hpp"
#include "bipdb/measures.hpp"
#include "bipdb/service.hpp"
#include "bipdb/store.hpp"
#include "bipdb/text_io.hpp"
#include "bipdb/version.hpp"

struct bip_graph {
    bipdb::CitationGraph graph;
    bipdb::GraphBuildReport report;
};

struct bip_scores {
    bipdb::ScoreVector sv;
};

struct bip_store {
    bipdb::ScoreStore store;
};

struct bip_server {
    bipdb::ScoreService service;
    bip_server(const bipdb::ScoreStore& store, bipdb::ScoreService::Options options)
        : service(store, std::move(options)) {}
};

namespace {

thread_local std::string t_error;

bip_status fail(bip_status code, const char* what) {
    t_error = what;
    return code;
}

// Runs fn, translating the library's exception taxonomy into status codes
// and stashing the message for bip_last_error.
template <typename Fn>
bip_status guarded(Fn&& fn) {
    t_error.clear();
    try {
        return fn();
    } catch (const bipdb::ParseError& e) {
        return fail(BIP_ERR_PARSE, e.what());
    } catch (const bipdb::IoError& e) {
        return fail(BIP_ERR_IO, e.what());
    } catch (const bipdb::IngestError& e) {
        return fail(BIP_ERR_INGEST, e.what());
    } catch (const bipdb::ConsistencyError& e) {
        return fail(BIP_ERR_CONSISTENCY, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(BIP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(BIP_ERR_RANGE, e.what());
    } catch (const std::exception& e) {
        return fail(BIP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BIP_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* name) {
    if (!p) throw std::invalid_argument(std::string("null argument: ") + name);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bipdb::MeasureParams to_params(const bip_params& p) {
    bipdb::MeasureParams out;
    out.current_year = p.current_year == 0 ? bipdb::current_utc_year() : p.current_year;
    out.icc_window = p.icc_window;
    out.pr_alpha = p.pr_alpha;
    out.pr_epsilon = p.pr_epsilon;
    out.ram_gamma = p.ram_gamma;
    out.att_alpha = p.att_alpha;
    out.att_beta = p.att_beta;
    out.att_gamma = p.att_gamma;
    out.att_rho = p.att_rho;
    out.att_window = p.att_window;
    out.max_iterations = p.max_iterations;
    out.workers = p.workers;
    return out;
}

bipdb::Measure to_measure(bip_measure m) {
    if (m < BIP_MEASURE_CC || m > BIP_MEASURE_ATTRANK)
        throw std::invalid_argument("unknown measure value " + std::to_string(m));
    return static_cast<bipdb::Measure>(m);
}

std::vector<bipdb::SourceDescriptor> to_sources(const bip_source* sources, size_t count) {
    require(sources, "sources");
    if (count == 0) throw std::invalid_argument("source_count must be at least 1");
    std::vector<bipdb::SourceDescriptor> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        require(sources[i].metadata_path, "sources[].metadata_path");
        require(sources[i].edges_path, "sources[].edges_path");
        out.push_back({sources[i].name ? sources[i].name : "source" + std::to_string(i + 1),
                       sources[i].metadata_path, sources[i].edges_path});
    }
    return out;
}

std::array<std::filesystem::path, 5> to_dump_paths(const char* const dump_paths[5]) {
    require(dump_paths, "dump_paths");
    std::array<std::filesystem::path, 5> out;
    for (size_t i = 0; i < 5; ++i) {
        require(dump_paths[i], "dump_paths[]");
        out[i] = dump_paths[i];
    }
    return out;
}

void emit_correlation(const bipdb::CorrelationMatrix& matrix, const char* out_csv_path,
                      const char* out_json_path, double* out_matrix25) {
    if (out_csv_path) bipdb::write_correlation_csv(matrix, out_csv_path);
    if (out_json_path) {
        bipdb::TextWriter w(out_json_path,
                            std::filesystem::path(out_json_path).extension() == ".gz");
        w.write(bipdb::correlation_to_json(matrix));
        w.close();
    }
    if (out_matrix25) {
        for (size_t i = 0; i < 5; ++i)
            for (size_t j = 0; j < 5; ++j) out_matrix25[i * 5 + j] = matrix.values[i][j];
    }
}

} // namespace

extern "C" {

const char* bip_version(void) { return bipdb::kVersion.data(); }

const char* bip_last_error(void) { return t_error.c_str(); }

const char* bip_measure_tag(bip_measure m) {
    if (m < BIP_MEASURE_CC || m > BIP_MEASURE_ATTRANK) return nullptr;
    return bipdb::measure_tag(static_cast<bipdb::Measure>(m)).data();
}

void bip_string_free(char* s) { std::free(s); }

void bip_params_defaults(bip_params* out) {
    if (!out) return;
    const bipdb::MeasureParams d;
    *out = bip_params{d.current_year, d.icc_window,    d.pr_alpha,  d.pr_epsilon,
                      d.ram_gamma,    d.att_alpha,     d.att_beta,  d.att_gamma,
                      d.att_rho,      d.att_window,    d.max_iterations, d.workers};
}

bip_status bip_params_validate(const bip_params* p) {
    return guarded([&] {
        require(p, "p");
        bipdb::validate_params(to_params(*p));
        return BIP_OK;
    });
}

bip_status bip_ingest_merge(const bip_source* sources, size_t source_count,
                            const char* out_metadata_path, const char* out_edges_path,
                            char** report_json) {
    return guarded([&] {
        require(out_metadata_path, "out_metadata_path");
        require(out_edges_path, "out_edges_path");
        const bipdb::MergedCorpus corpus = bipdb::merge_sources(to_sources(sources, source_count));
        bipdb::write_unified(corpus, out_metadata_path, out_edges_path);
        if (report_json) *report_json = dup_string(corpus.report.to_json());
        return BIP_OK;
    });
}

bip_status bip_graph_build(const bip_source* sources, size_t source_count, bip_graph** out,
                           char** report_json) {
    return guarded([&] {
        require(out, "out");
        const bipdb::MergedCorpus corpus = bipdb::merge_sources(to_sources(sources, source_count));
        bipdb::GraphBuild build = bipdb::build_graph(corpus);
        if (report_json) {
            nlohmann::ordered_json j;
            j["ingest"] = nlohmann::ordered_json::parse(corpus.report.to_json());
            j["graph"] = nlohmann::ordered_json::parse(build.report.to_json());
            j["nodes"] = build.graph.node_count();
            j["edges"] = build.graph.edge_count();
            *report_json = dup_string(j.dump(2) + "\n");
        }
        *out = new bip_graph{std::move(build.graph), build.report};
        return BIP_OK;
    });
}

void bip_graph_free(bip_graph* g) { delete g; }

uint32_t bip_graph_node_count(const bip_graph* g) { return g ? g->graph.node_count() : 0; }

uint64_t bip_graph_edge_count(const bip_graph* g) { return g ? g->graph.edge_count() : 0; }

bip_status bip_graph_find(const bip_graph* g, const char* doi, uint32_t* out_id,
                          int* out_found) {
    return guarded([&] {
        require(g, "g");
        require(doi, "doi");
        require(out_found, "out_found");
        const auto id = g->graph.find(bipdb::normalize_doi(doi));
        *out_found = id.has_value() ? 1 : 0;
        if (id && out_id) *out_id = *id;
        return BIP_OK;
    });
}

bip_status bip_graph_doi(const bip_graph* g, uint32_t id, const char** out) {
    return guarded([&] {
        require(g, "g");
        require(out, "out");
        *out = g->graph.doi(id).data(); // graph DOIs are NUL-terminated strings
        return BIP_OK;
    });
}

bip_status bip_graph_year(const bip_graph* g, uint32_t id, int32_t* out) {
    return guarded([&] {
        require(g, "g");
        require(out, "out");
        *out = g->graph.year(id);
        return BIP_OK;
    });
}

bip_status bip_graph_in_degree(const bip_graph* g, uint32_t id, uint32_t* out) {
    return guarded([&] {
        require(g, "g");
        require(out, "out");
        *out = g->graph.in_degree(id);
        return BIP_OK;
    });
}

bip_status bip_graph_out_degree(const bip_graph* g, uint32_t id, uint32_t* out) {
    return guarded([&] {
        require(g, "g");
        require(out, "out");
        *out = g->graph.out_degree(id);
        return BIP_OK;
    });
}

bip_status bip_compute(const bip_graph* g, const bip_params* p, bip_measure m,
                       bip_scores** out) {
    return guarded([&] {
        require(g, "g");
        require(p, "p");
        require(out, "out");
        *out = new bip_scores{bipdb::compute(g->graph, to_params(*p), to_measure(m))};
        return BIP_OK;
    });
}

bip_status bip_compute_all(const bip_graph* g, const bip_params* p, bip_scores* out[5]) {
    return guarded([&] {
        require(g, "g");
        require(p, "p");
        require(out, "out");
        auto vectors = bipdb::compute_all(g->graph, to_params(*p));
        for (size_t i = 0; i < vectors.size(); ++i)
            out[i] = new bip_scores{std::move(vectors[i])};
        return BIP_OK;
    });
}

void bip_scores_free(bip_scores* s) { delete s; }

bip_measure bip_scores_measure(const bip_scores* s) {
    return s ? static_cast<bip_measure>(s->sv.measure) : BIP_MEASURE_CC;
}

uint64_t bip_scores_len(const bip_scores* s) { return s ? s->sv.scores.size() : 0; }

const double* bip_scores_data(const bip_scores* s) { return s ? s->sv.scores.data() : nullptr; }

bip_status bip_scores_value(const bip_scores* s, uint64_t index, double* out) {
    return guarded([&] {
        require(s, "s");
        require(out, "out");
        if (index >= s->sv.scores.size())
            throw std::out_of_range("score index " + std::to_string(index) + " out of range");
        *out = s->sv.scores[index];
        return BIP_OK;
    });
}

int32_t bip_scores_iterations(const bip_scores* s) { return s ? s->sv.iterations_run : 0; }

int bip_scores_converged(const bip_scores* s) { return s && s->sv.converged ? 1 : 0; }

uint64_t bip_scores_future_dated(const bip_scores* s) { return s ? s->sv.future_dated : 0; }

bip_status bip_dump_write(const bip_scores* s, const bip_graph* g, const char* graph_id,
                          int compressed, const char* dir, char** out_path) {
    return guarded([&] {
        require(s, "s");
        require(g, "g");
        require(graph_id, "graph_id");
        require(dir, "dir");
        bipdb::DumpSpec spec;
        spec.measure = s->sv.measure;
        spec.graph_id = graph_id;
        spec.params = s->sv.params;
        spec.compressed = compressed != 0;
        const auto path = bipdb::write_dump(s->sv, g->graph, spec, dir);
        if (out_path) *out_path = dup_string(path.string());
        return BIP_OK;
    });
}

bip_status bip_dump_convert(const char* dump_path, const char* out_dir, int compressed,
                            char** out_path) {
    return guarded([&] {
        require(dump_path, "dump_path");
        require(out_dir, "out_dir");
        const auto path = bipdb::convert_dump(dump_path, out_dir, compressed != 0);
        if (out_path) *out_path = dup_string(path.string());
        return BIP_OK;
    });
}

bip_status bip_correlate_dumps(const char* const dump_paths[5], uint32_t k,
                               const char* out_csv_path, const char* out_json_path,
                               double* out_matrix25) {
    return guarded([&] {
        const auto matrix = bipdb::correlate_dumps(to_dump_paths(dump_paths), k);
        emit_correlation(matrix, out_csv_path, out_json_path, out_matrix25);
        return BIP_OK;
    });
}

bip_status bip_correlate_scores(const bip_scores* const scores[5], uint32_t k,
                                const char* out_csv_path, const char* out_json_path,
                                double* out_matrix25) {
    return guarded([&] {
        require(scores, "scores");
        std::array<bipdb::ScoreVector, 5> vectors;
        std::array<bool, 5> seen{};
        for (size_t i = 0; i < 5; ++i) {
            require(scores[i], "scores[]");
            const auto slot = static_cast<size_t>(scores[i]->sv.measure);
            if (seen[slot])
                throw std::invalid_argument(
                    "two score sets for " +
                    std::string(bipdb::measure_tag(scores[i]->sv.measure)));
            seen[slot] = true;
            vectors[slot] = scores[i]->sv;
        }
        const auto matrix = bipdb::correlation_matrix(vectors, k);
        emit_correlation(matrix, out_csv_path, out_json_path, out_matrix25);
        return BIP_OK;
    });
}

bip_status bip_store_open(const char* const dump_paths[5], bip_store** out) {
    return guarded([&] {
        require(out, "out");
        *out = new bip_store{bipdb::ScoreStore::load(to_dump_paths(dump_paths))};
        return BIP_OK;
    });
}

void bip_store_free(bip_store* s) { delete s; }

uint64_t bip_store_size(const bip_store* s) { return s ? s->store.size() : 0; }

const char* bip_store_graph_id(const bip_store* s) {
    return s ? s->store.graph_id().c_str() : nullptr;
}

bip_status bip_store_get(const bip_store* s, const char* doi, double out_scores[5],
                         int* out_found) {
    return guarded([&] {
        require(s, "s");
        require(doi, "doi");
        require(out_found, "out_found");
        const auto row = s->store.get(doi);
        *out_found = row.has_value() ? 1 : 0;
        if (row && out_scores)
            for (size_t i = 0; i < 5; ++i) out_scores[i] = (*row)[i];
        return BIP_OK;
    });
}

bip_status bip_server_start(const bip_store* s, const char* host, int port, uint32_t batch_cap,
                            bip_server** out, int* out_port) {
    return guarded([&] {
        require(s, "s");
        require(out, "out");
        bipdb::ScoreService::Options options;
        if (host) options.host = host;
        options.port = port;
        if (batch_cap > 0) options.batch_cap = batch_cap;
        auto server = std::make_unique<bip_server>(s->store, std::move(options));
        const int bound = server->service.start();
        if (out_port) *out_port = bound;
        *out = server.release();
        return BIP_OK;
    });
}

bip_status bip_server_stop(bip_server* s) {
    return guarded([&] {
        require(s, "s");
        s->service.stop();
        return BIP_OK;
    });
}

void bip_server_free(bip_server* s) { delete s; }

} // extern "C"
