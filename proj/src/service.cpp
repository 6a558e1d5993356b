#include "bipdb/service.hpp"

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bipdb/errors.hpp"

namespace bipdb {

using nlohmann::ordered_json;

namespace {

ordered_json scores_json(const std::array<double, 5>& row) {
    ordered_json out;
    for (size_t m = 0; m < 5; ++m) out[std::string(measure_key(kAllMeasures[m]))] = row[m];
    return out;
}

ordered_json metadata_json(const ScoreStore& store) {
    ordered_json measures;
    ordered_json dumps;
    for (size_t m = 0; m < 5; ++m) {
        const DumpSpec& spec = store.dump_specs()[m];
        ordered_json params = ordered_json::object();
        for (const auto& [key, value] : dump_param_list(spec)) params[key] = value;
        measures[std::string(measure_tag(spec.measure))] = params;
        dumps[std::string(measure_tag(spec.measure))] = store.dump_names()[m];
    }
    return {{"graph_id", store.graph_id()},
            {"dois", store.size()},
            {"loaded_at", store.loaded_at()},
            {"measures", measures},
            {"dumps", dumps}};
}

void reply_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, std::string_view message) {
    reply_json(res, status, {{"error", std::string(message)}});
}

} // namespace

struct ScoreService::Impl {
    const ScoreStore& store;
    Options options;
    httplib::Server server;
    std::thread worker;
    int port = -1;

    Impl(const ScoreStore& store, Options options) : store(store), options(std::move(options)) {}

    void route() {
        server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
            ordered_json body = {{"status", "ok"}};
            body.update(metadata_json(store));
            reply_json(res, 200, body);
        });

        // DOIs contain slashes, so the tail of the path is the identifier.
        server.Get("/v1/scores/(.+)", [this](const httplib::Request& req,
                                             httplib::Response& res) {
            const std::string& doi = req.matches[1];
            if (const auto row = store.get(doi)) {
                reply_json(res, 200,
                           {{"doi", doi}, {"found", true}, {"scores", scores_json(*row)}});
            } else {
                reply_json(res, 404, {{"doi", doi}, {"found", false}, {"scores", nullptr}});
            }
        });

        server.Post("/v1/scores", [this](const httplib::Request& req, httplib::Response& res) {
            const auto body = ordered_json::parse(req.body, nullptr, false);
            if (body.is_discarded()) return reply_error(res, 400, "request body is not JSON");
            if (!body.is_object() || !body.contains("dois") || !body["dois"].is_array())
                return reply_error(res, 400, "expected an object with a \"dois\" array");
            const auto& dois = body["dois"];
            if (dois.empty()) return reply_error(res, 400, "\"dois\" must not be empty");
            if (dois.size() > options.batch_cap)
                return reply_error(res, 400,
                                   "\"dois\" exceeds the batch cap of " +
                                       std::to_string(options.batch_cap));
            for (const auto& d : dois)
                if (!d.is_string()) return reply_error(res, 400, "\"dois\" entries must be strings");

            ordered_json results = ordered_json::array();
            for (const auto& d : dois) {
                const std::string doi = d.get<std::string>();
                if (const auto row = store.get(doi)) {
                    results.push_back(
                        {{"doi", doi}, {"found", true}, {"scores", scores_json(*row)}});
                } else {
                    results.push_back({{"doi", doi}, {"found", false}, {"scores", nullptr}});
                }
            }
            reply_json(res, 200, {{"metadata", metadata_json(store)}, {"results", results}});
        });
    }
};

ScoreService::ScoreService(const ScoreStore& store, Options options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
    impl_->route();
}

ScoreService::~ScoreService() { stop(); }

int ScoreService::start() {
    if (impl_->worker.joinable()) return impl_->port; // already serving
    int port = impl_->options.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(impl_->options.host);
        if (port < 0) port = -1;
    } else if (!impl_->server.bind_to_port(impl_->options.host, port)) {
        port = -1;
    }
    if (port < 0)
        throw IoError("cannot bind " + impl_->options.host + ":" +
                      std::to_string(impl_->options.port));
    impl_->port = port;
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void ScoreService::stop() {
    if (!impl_->worker.joinable()) return;
    impl_->server.stop();
    impl_->worker.join();
}

int ScoreService::port() const { return impl_->port; }

} // namespace bipdb
