// bip — command-line front end over the bipdb C API.
//
// Subcommands: ingest, compute, correlate, export, serve, pipeline. All
// options are global (they may appear before or after the subcommand) and can
// also come from a key=value config file (--config) or from BIP_* environment
// variables; the command line wins over both. Exit codes: 0 success,
// 2 configuration/usage error, 1 runtime failure.

#include <bipdb.h>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

using nlohmann::ordered_json;

// Failure carrying the process exit code.
struct Failure {
    int code;
    std::string message;
};

void check(bip_status status) {
    if (status == BIP_OK) return;
    throw Failure{status == BIP_ERR_INVALID_ARGUMENT ? 2 : 1, bip_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) { throw Failure{2, message}; }

// Owner for strings returned by the library.
struct CStr {
    char* ptr = nullptr;
    ~CStr() { bip_string_free(ptr); }
    CStr() = default;
    CStr(const CStr&) = delete;
    CStr& operator=(const CStr&) = delete;
    std::string str() const { return ptr ? ptr : ""; }
};

template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, std::integral_constant<void (*)(T*), Free>>;
using GraphHandle = Handle<bip_graph, bip_graph_free>;
using ScoresHandle = Handle<bip_scores, bip_scores_free>;
using StoreHandle = Handle<bip_store, bip_store_free>;
using ServerHandle = Handle<bip_server, bip_server_free>;

struct Options {
    std::vector<std::string> sources; // name:metadata_path:edges_path
    std::vector<std::string> dumps;
    std::string out_dir = "out";
    std::string graph_id = "unified";
    std::string listen = "127.0.0.1:8080";
    uint32_t k = 100;
    uint32_t batch_cap = 1000;
    bool no_compress = false;
    bip_params params{};
};

// Parsed --sources values; `parts` owns the strings the bip_source pointers
// reference, so keep the whole struct alive while the sources are in use.
struct SourceArgs {
    std::vector<std::string> parts;
    std::vector<bip_source> sources;
};

SourceArgs parse_sources(const std::vector<std::string>& specs) {
    if (specs.empty()) usage_error("at least one --sources name:metadata:edges is required");
    SourceArgs args;
    args.parts.reserve(specs.size() * 3);
    for (const std::string& spec : specs) {
        const size_t first = spec.find(':');
        const size_t second = first == std::string::npos ? first : spec.find(':', first + 1);
        if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos)
            usage_error("--sources entry must be name:metadata:edges, got \"" + spec + "\"");
        args.parts.push_back(spec.substr(0, first));
        args.parts.push_back(spec.substr(first + 1, second - first - 1));
        args.parts.push_back(spec.substr(second + 1));
        if (args.parts[args.parts.size() - 2].empty() || args.parts.back().empty())
            usage_error("--sources entry \"" + spec + "\" has an empty path");
    }
    for (size_t i = 0; i < specs.size(); ++i) {
        const std::string& name = args.parts[i * 3];
        args.sources.push_back({name.empty() ? nullptr : name.c_str(),
                                args.parts[i * 3 + 1].c_str(), args.parts[i * 3 + 2].c_str()});
    }
    return args;
}

std::array<const char*, 5> five_dumps(const std::vector<std::string>& dumps) {
    if (dumps.size() != 5)
        usage_error("exactly five --dumps paths (one per measure) are required, got " +
                    std::to_string(dumps.size()));
    return {dumps[0].c_str(), dumps[1].c_str(), dumps[2].c_str(), dumps[3].c_str(),
            dumps[4].c_str()};
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Failure{1, "cannot write " + path.string()};
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Failure{1, "cannot create output directory " + dir + ": " + ec.message()};
}

void validate_config(const Options& opt) {
    check(bip_params_validate(&opt.params));
    if (opt.graph_id.empty()) usage_error("--graph-id must not be empty");
    for (char c : opt.graph_id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) usage_error("--graph-id must match [a-z0-9_]+, got \"" + opt.graph_id + "\"");
    }
    if (opt.k < 1) usage_error("--k must be at least 1");
}

ordered_json params_json(const bip_params& p) {
    return {{"current_year", p.current_year},
            {"icc_window", p.icc_window},
            {"pr_alpha", p.pr_alpha},
            {"pr_epsilon", p.pr_epsilon},
            {"ram_gamma", p.ram_gamma},
            {"att_alpha", p.att_alpha},
            {"att_beta", p.att_beta},
            {"att_gamma", p.att_gamma},
            {"att_rho", p.att_rho},
            {"att_window", p.att_window ? p.att_window : p.icc_window},
            {"max_iterations", p.max_iterations}};
}

// ---------------------------------------------------------------- stages

struct IngestArtifacts {
    std::filesystem::path metadata;
    std::filesystem::path edges;
};

IngestArtifacts run_ingest(const Options& opt) {
    validate_config(opt);
    const SourceArgs args = parse_sources(opt.sources);
    const std::vector<bip_source>& sources = args.sources;
    ensure_out_dir(opt.out_dir);
    const std::string ext = opt.no_compress ? ".csv" : ".csv.gz";
    IngestArtifacts artifacts{std::filesystem::path(opt.out_dir) / ("unified_metadata" + ext),
                              std::filesystem::path(opt.out_dir) / ("unified_edges" + ext)};
    CStr report;
    check(bip_ingest_merge(sources.data(), sources.size(), artifacts.metadata.c_str(),
                           artifacts.edges.c_str(), &report.ptr));
    write_text(std::filesystem::path(opt.out_dir) / "ingest_report.json", report.str());
    std::cout << "ingest: wrote " << artifacts.metadata.string() << ", "
              << artifacts.edges.string() << ", ingest_report.json\n";
    return artifacts;
}

struct ComputeArtifacts {
    std::array<ScoresHandle, 5> scores;
    std::vector<std::string> dump_paths;
};

// Builds the graph from `sources`, computes all five measures and writes one
// dump per measure plus compute_report.json into out_dir.
ComputeArtifacts run_compute_from(const Options& opt, const std::vector<bip_source>& sources) {
    ensure_out_dir(opt.out_dir);

    GraphHandle graph;
    CStr build_report;
    {
        bip_graph* raw = nullptr;
        check(bip_graph_build(sources.data(), sources.size(), &raw, &build_report.ptr));
        graph.reset(raw);
    }

    ComputeArtifacts artifacts;
    {
        bip_scores* raw[5] = {};
        check(bip_compute_all(graph.get(), &opt.params, raw));
        for (size_t i = 0; i < 5; ++i) artifacts.scores[i].reset(raw[i]);
    }

    ordered_json measures;
    for (size_t i = 0; i < 5; ++i) {
        const bip_scores* s = artifacts.scores[i].get();
        CStr path;
        check(bip_dump_write(s, graph.get(), opt.graph_id.c_str(), opt.no_compress ? 0 : 1,
                             opt.out_dir.c_str(), &path.ptr));
        artifacts.dump_paths.push_back(path.str());
        measures[bip_measure_tag(bip_scores_measure(s))] = {
            {"iterations", bip_scores_iterations(s)},
            {"converged", bip_scores_converged(s) != 0},
            {"future_dated", bip_scores_future_dated(s)},
            {"dump", std::filesystem::path(path.str()).filename().string()}};
    }

    ordered_json report;
    report["graph_id"] = opt.graph_id;
    report["params"] = params_json(opt.params);
    report["build"] = ordered_json::parse(build_report.str());
    report["measures"] = measures;
    write_text(std::filesystem::path(opt.out_dir) / "compute_report.json",
               report.dump(2) + "\n");
    std::cout << "compute: " << bip_graph_node_count(graph.get()) << " nodes, "
              << bip_graph_edge_count(graph.get()) << " edges; wrote 5 dumps and "
              << "compute_report.json\n";
    return artifacts;
}

void run_correlate_scores(const Options& opt, const std::array<ScoresHandle, 5>& scores) {
    ensure_out_dir(opt.out_dir);
    const auto csv = std::filesystem::path(opt.out_dir) / "correlation.csv";
    const auto json = std::filesystem::path(opt.out_dir) / "correlation.json";
    const bip_scores* raw[5] = {scores[0].get(), scores[1].get(), scores[2].get(),
                                scores[3].get(), scores[4].get()};
    check(bip_correlate_scores(raw, opt.k, csv.c_str(), json.c_str(), nullptr));
    std::cout << "correlate: wrote " << csv.string() << " and " << json.string() << " (k="
              << opt.k << ")\n";
}

void run_correlate_dumps(const Options& opt) {
    validate_config(opt);
    const auto dumps = five_dumps(opt.dumps);
    ensure_out_dir(opt.out_dir);
    const auto csv = std::filesystem::path(opt.out_dir) / "correlation.csv";
    const auto json = std::filesystem::path(opt.out_dir) / "correlation.json";
    check(bip_correlate_dumps(dumps.data(), opt.k, csv.c_str(), json.c_str(), nullptr));
    std::cout << "correlate: wrote " << csv.string() << " and " << json.string() << " (k="
              << opt.k << ")\n";
}

void run_export(const Options& opt) {
    if (opt.dumps.empty()) usage_error("--dumps requires at least one dump to convert");
    ensure_out_dir(opt.out_dir);
    ordered_json converted = ordered_json::array();
    for (const std::string& dump : opt.dumps) {
        CStr path;
        check(bip_dump_convert(dump.c_str(), opt.out_dir.c_str(), opt.no_compress ? 0 : 1,
                               &path.ptr));
        converted.push_back({{"from", dump}, {"to", path.str()}});
        std::cout << "export: " << dump << " -> " << path.str() << "\n";
    }
    const ordered_json report = {{"converted", converted}};
    write_text(std::filesystem::path(opt.out_dir) / "export_report.json",
               report.dump(2) + "\n");
}

std::pair<std::string, int> parse_listen(const std::string& listen) {
    const size_t colon = listen.rfind(':');
    if (colon == std::string::npos) return {listen, 8080};
    const std::string host = listen.substr(0, colon);
    try {
        const int port = std::stoi(listen.substr(colon + 1));
        if (port < 0 || port > 65535) throw std::out_of_range("port");
        return {host.empty() ? "127.0.0.1" : host, port};
    } catch (const std::exception&) {
        usage_error("--listen must be host:port, got \"" + listen + "\"");
    }
}

void run_serve(const Options& opt) {
    const auto dumps = five_dumps(opt.dumps);
    const auto [host, port] = parse_listen(opt.listen);

    StoreHandle store;
    {
        bip_store* raw = nullptr;
        check(bip_store_open(dumps.data(), &raw));
        store.reset(raw);
    }

    // Block the shutdown signals before the server threads start so every
    // thread inherits the mask and sigwait below is race-free.
    sigset_t mask;
    sigemptyset(&mask);
    sigaddset(&mask, SIGINT);
    sigaddset(&mask, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &mask, nullptr);

    ServerHandle server;
    int bound_port = 0;
    {
        bip_server* raw = nullptr;
        check(bip_server_start(store.get(), host.c_str(), port, opt.batch_cap, &raw,
                               &bound_port));
        server.reset(raw);
    }
    std::cout << "serve: graph \"" << bip_store_graph_id(store.get()) << "\" with "
              << bip_store_size(store.get()) << " DOIs on http://" << host << ":" << bound_port
              << " (Ctrl-C to stop)\n"
              << std::flush;

    int sig = 0;
    sigwait(&mask, &sig);
    std::cout << "serve: shutting down\n";
    check(bip_server_stop(server.get()));
}

void run_pipeline(const Options& opt) {
    const IngestArtifacts unified = run_ingest(opt);
    // The unified corpus re-ingests as a single source; building from it
    // keeps the written artifacts and the graph provably in sync.
    const std::string meta = unified.metadata.string();
    const std::string edges = unified.edges.string();
    const std::vector<bip_source> source = {{"unified", meta.c_str(), edges.c_str()}};
    const ComputeArtifacts computed = run_compute_from(opt, source);
    run_correlate_scores(opt, computed.scores);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"citation impact measures over DOI-to-DOI citation graphs"};
    app.set_version_flag("--version", std::string(bip_version()));
    app.set_config("--config", "", "Key=value config file; command line overrides it");
    app.fallthrough();
    app.require_subcommand(1);

    Options opt;
    bip_params_defaults(&opt.params);

    const auto add = [&](const std::string& flag, auto& field, const std::string& help) {
        CLI::Option* o = app.add_option(flag, field, help);
        std::string env = "BIP" + flag.substr(1);
        for (char& c : env) c = c == '-' ? '_' : static_cast<char>(std::toupper(c));
        o->envname(env);
        return o;
    };

    add("--sources", opt.sources,
        "Citation source as name:metadata_csv:edges_csv (repeatable; .gz allowed)");
    add("--dumps", opt.dumps, "Score dump paths (five for correlate/serve)");
    add("--out-dir", opt.out_dir, "Directory for artifacts (created if missing)");
    add("--graph-id", opt.graph_id, "Graph label embedded in dump filenames ([a-z0-9_]+)");
    add("--k", opt.k, "Ranking depth for correlations");
    add("--listen", opt.listen, "host:port to serve on (port 0 picks a free port)");
    add("--batch-cap", opt.batch_cap, "Maximum DOIs per POST /v1/scores request");
    app.add_flag("--no-compress", opt.no_compress, "Write plain files instead of gzip")
        ->envname("BIP_NO_COMPRESS");

    add("--current-year", opt.params.current_year, "Reference year for the time-aware measures");
    add("--icc-window", opt.params.icc_window, "Years after publication counted by iCC");
    add("--pr-alpha", opt.params.pr_alpha, "PageRank damping factor");
    add("--pr-epsilon", opt.params.pr_epsilon, "Convergence threshold (L1)");
    add("--ram-gamma", opt.params.ram_gamma, "Per-year citation decay");
    add("--att-alpha", opt.params.att_alpha, "AttRank citation-following weight");
    add("--att-beta", opt.params.att_beta, "AttRank recent-attention weight");
    add("--att-gamma", opt.params.att_gamma, "AttRank age-prior weight");
    add("--att-rho", opt.params.att_rho, "AttRank age-decay exponent");
    add("--att-window", opt.params.att_window,
        "Recent-attention window in years (0 inherits --icc-window)");
    add("--max-iterations", opt.params.max_iterations, "Iteration cap for PR/AttRank");
    add("--workers", opt.params.workers, "Worker threads (0 = all cores)");

    CLI::App* ingest = app.add_subcommand("ingest", "Merge sources into a unified corpus");
    CLI::App* compute =
        app.add_subcommand("compute", "Build the graph and write all five score dumps");
    CLI::App* correlate =
        app.add_subcommand("correlate", "Pairwise top-k rank correlations over five dumps");
    CLI::App* export_cmd =
        app.add_subcommand("export", "Re-emit dumps with different compression");
    CLI::App* serve = app.add_subcommand("serve", "Serve dumps over HTTP");
    CLI::App* pipeline =
        app.add_subcommand("pipeline", "ingest + compute + correlate in one run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(ingest)) {
            run_ingest(opt);
        } else if (app.got_subcommand(compute)) {
            validate_config(opt);
            const SourceArgs args = parse_sources(opt.sources);
            run_compute_from(opt, args.sources);
        } else if (app.got_subcommand(correlate)) {
            run_correlate_dumps(opt);
        } else if (app.got_subcommand(export_cmd)) {
            run_export(opt);
        } else if (app.got_subcommand(serve)) {
            run_serve(opt);
        } else if (app.got_subcommand(pipeline)) {
            run_pipeline(opt);
        }
    } catch (const Failure& f) {
        std::cerr << "bip: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "bip: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
