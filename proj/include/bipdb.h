/*
 * bipdb — citation-graph impact measures behind a C API.
 *
 * The library ingests DOI-to-DOI citation sources, builds a unified citation
 * graph, computes five impact measures (CC, iCC, PR, RAM, AttRank), writes
 * and reads the two-column TSV dump format, correlates rankings, and serves
 * precomputed scores over HTTP.
 *
 * Conventions:
 *   - Every fallible call returns bip_status; BIP_OK is 0. On failure,
 *     bip_last_error() holds a message for the calling thread, valid until
 *     its next bipdb call.
 *   - Objects come back through out-parameters as opaque handles and are
 *     released with their matching *_free function. NULL is safe to free.
 *   - Returned char* strings (out-parameters marked "malloc'd") are released
 *     with bip_string_free.
 *   - Handles are immutable after creation, so sharing them between threads
 *     for reads is safe.
 */
#ifndef BIPDB_H
#define BIPDB_H

#include <stddef.h>
#include <stdint.h>

#ifndef BIPDB_EXPORT
#define BIPDB_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bip_status {
    BIP_OK = 0,
    BIP_ERR_INVALID_ARGUMENT = 1, /* bad parameter value or NULL argument */
    BIP_ERR_IO = 2,               /* unreadable/unwritable file, bind failure */
    BIP_ERR_PARSE = 3,            /* malformed input content */
    BIP_ERR_INGEST = 4,           /* no usable input */
    BIP_ERR_CONSISTENCY = 5,      /* inputs that must agree do not */
    BIP_ERR_RANGE = 6,            /* index out of bounds */
    BIP_ERR_INTERNAL = 7
} bip_status;

typedef enum bip_measure {
    BIP_MEASURE_CC = 0,     /* citation count */
    BIP_MEASURE_ICC = 1,    /* citations within the incubation window */
    BIP_MEASURE_PR = 2,     /* PageRank */
    BIP_MEASURE_RAM = 3,    /* decay-weighted citation sum */
    BIP_MEASURE_ATTRANK = 4 /* PageRank with attention/age teleport */
} bip_measure;

BIPDB_EXPORT const char* bip_version(void);

/* Message for the last failure on this thread; empty string when none. */
BIPDB_EXPORT const char* bip_last_error(void);

/* Display tag: "CC", "iCC", "PR", "RAM", "AttRank"; NULL for a bad value. */
BIPDB_EXPORT const char* bip_measure_tag(bip_measure m);

BIPDB_EXPORT void bip_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Parameters                                                          */

typedef struct bip_params {
    int32_t current_year; /* reference "now"; 0 = current UTC year */
    int32_t icc_window;   /* y: years after publication counted by iCC */
    double pr_alpha;      /* damping, [0, 1] */
    double pr_epsilon;    /* L1 convergence threshold, > 0 */
    double ram_gamma;     /* per-year decay, (0, 1) */
    double att_alpha;     /* AttRank weights; alpha+beta+gamma = 1, alpha < 1 */
    double att_beta;
    double att_gamma;
    double att_rho;       /* age-decay exponent, > 0 */
    int32_t att_window;   /* recent-attention years; 0 inherits icc_window */
    int32_t max_iterations;
    int32_t workers;      /* 0 = all hardware threads */
} bip_params;

/* Fills the documented defaults (alpha 0.5, epsilon 1e-12, gamma 0.6,
 * AttRank 0.2/0.5/0.3 with rho 0.16, windows 3, 200 iterations). */
BIPDB_EXPORT void bip_params_defaults(bip_params* out);

/* Validates all parameters (every measure's constraints). */
BIPDB_EXPORT bip_status bip_params_validate(const bip_params* p);

/* ------------------------------------------------------------------ */
/* Ingest and graph build                                              */

/* One citation source: metadata CSV ("doi,year") and edge CSV
 * ("citing,cited"); either file may be gzip-compressed. */
typedef struct bip_source {
    const char* name;
    const char* metadata_path;
    const char* edges_path;
} bip_source;

/* Merges the sources into unified metadata/edge CSVs (gzipped when the path
 * ends in .gz): records deduplicated by normalized DOI with the minimum year
 * winning conflicts, edges deduplicated with self-loops removed, both sorted
 * so the output is independent of source order. report_json (optional,
 * malloc'd) receives per-source and unified counts. */
BIPDB_EXPORT bip_status bip_ingest_merge(const bip_source* sources, size_t source_count,
                                         const char* out_metadata_path,
                                         const char* out_edges_path, char** report_json);

typedef struct bip_graph bip_graph;

/* Merges the sources in memory and assembles the citation graph over the
 * records with a usable year. Node ids are dense and ascend with the DOIs.
 * report_json (optional, malloc'd) receives {"ingest": ..., "graph": ...,
 * "nodes": ..., "edges": ...}. */
BIPDB_EXPORT bip_status bip_graph_build(const bip_source* sources, size_t source_count,
                                        bip_graph** out, char** report_json);
BIPDB_EXPORT void bip_graph_free(bip_graph* g);

BIPDB_EXPORT uint32_t bip_graph_node_count(const bip_graph* g);
BIPDB_EXPORT uint64_t bip_graph_edge_count(const bip_graph* g);

/* *out_found is set to 0/1; *out_id only written when found. The DOI is
 * normalized before lookup. */
BIPDB_EXPORT bip_status bip_graph_find(const bip_graph* g, const char* doi, uint32_t* out_id,
                                       int* out_found);

/* Borrowed pointer, owned by the graph. */
BIPDB_EXPORT bip_status bip_graph_doi(const bip_graph* g, uint32_t id, const char** out);
BIPDB_EXPORT bip_status bip_graph_year(const bip_graph* g, uint32_t id, int32_t* out);
BIPDB_EXPORT bip_status bip_graph_in_degree(const bip_graph* g, uint32_t id, uint32_t* out);
BIPDB_EXPORT bip_status bip_graph_out_degree(const bip_graph* g, uint32_t id, uint32_t* out);

/* ------------------------------------------------------------------ */
/* Measures                                                            */

typedef struct bip_scores bip_scores;

BIPDB_EXPORT bip_status bip_compute(const bip_graph* g, const bip_params* p, bip_measure m,
                                    bip_scores** out);

/* All five measures in bip_measure order. On failure no handle is returned. */
BIPDB_EXPORT bip_status bip_compute_all(const bip_graph* g, const bip_params* p,
                                        bip_scores* out[5]);
BIPDB_EXPORT void bip_scores_free(bip_scores* s);

BIPDB_EXPORT bip_measure bip_scores_measure(const bip_scores* s);
BIPDB_EXPORT uint64_t bip_scores_len(const bip_scores* s);
/* Borrowed pointer to bip_scores_len() doubles indexed by node id. */
BIPDB_EXPORT const double* bip_scores_data(const bip_scores* s);
BIPDB_EXPORT bip_status bip_scores_value(const bip_scores* s, uint64_t index, double* out);
BIPDB_EXPORT int32_t bip_scores_iterations(const bip_scores* s);
BIPDB_EXPORT int bip_scores_converged(const bip_scores* s);
/* Future-dated inputs clamped to age zero during the computation. */
BIPDB_EXPORT uint64_t bip_scores_future_dated(const bip_scores* s);

/* ------------------------------------------------------------------ */
/* Dumps                                                               */

/* Writes the dump "{MEASURE}_{graph_id}_{params...}.tsv[.gz]" into dir:
 * one "DOI<TAB>score" row per node, descending score, ties by ascending
 * DOI, scores at 17 significant digits. graph_id must match [a-z0-9_]+.
 * out_path (optional, malloc'd) receives the full path. */
BIPDB_EXPORT bip_status bip_dump_write(const bip_scores* s, const bip_graph* g,
                                       const char* graph_id, int compressed, const char* dir,
                                       char** out_path);

/* Re-emits an existing dump with the given compression, preserving content;
 * only the extension changes. */
BIPDB_EXPORT bip_status bip_dump_convert(const char* dump_path, const char* out_dir,
                                         int compressed, char** out_path);

/* ------------------------------------------------------------------ */
/* Ranking correlation                                                 */

/* Pairwise top-k rank correlation over the five dumps (one per measure, any
 * order, same graph id). Optional outputs: CSV table, JSON object, and the
 * row-major 5x5 matrix in bip_measure order. */
BIPDB_EXPORT bip_status bip_correlate_dumps(const char* const dump_paths[5], uint32_t k,
                                            const char* out_csv_path, const char* out_json_path,
                                            double* out_matrix25);

/* Same over in-memory score handles (one per measure, any order). */
BIPDB_EXPORT bip_status bip_correlate_scores(const bip_scores* const scores[5], uint32_t k,
                                             const char* out_csv_path,
                                             const char* out_json_path, double* out_matrix25);

/* ------------------------------------------------------------------ */
/* Score store and HTTP service                                        */

typedef struct bip_store bip_store;

/* Joins five dumps (one per measure, same graph id, same DOI set) into an
 * immutable DOI -> five-scores table. */
BIPDB_EXPORT bip_status bip_store_open(const char* const dump_paths[5], bip_store** out);
BIPDB_EXPORT void bip_store_free(bip_store* s);

BIPDB_EXPORT uint64_t bip_store_size(const bip_store* s);
/* Borrowed pointer, owned by the store. */
BIPDB_EXPORT const char* bip_store_graph_id(const bip_store* s);

/* Scores land in out_scores[5] in bip_measure order when found. The DOI is
 * normalized before lookup; *out_found is set to 0/1. */
BIPDB_EXPORT bip_status bip_store_get(const bip_store* s, const char* doi, double out_scores[5],
                                      int* out_found);

typedef struct bip_server bip_server;

/* Serves the store over HTTP on a background thread:
 *   GET  /v1/health, GET /v1/scores/{doi}, POST /v1/scores {"dois": [...]}.
 * port 0 picks a free port; the bound port lands in *out_port. batch_cap 0
 * means the default cap of 1000. The store must outlive the server. */
BIPDB_EXPORT bip_status bip_server_start(const bip_store* s, const char* host, int port,
                                         uint32_t batch_cap, bip_server** out, int* out_port);
/* Stops accepting and joins the serving thread. Safe to call twice. */
BIPDB_EXPORT bip_status bip_server_stop(bip_server* s);
BIPDB_EXPORT void bip_server_free(bip_server* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BIPDB_H */
