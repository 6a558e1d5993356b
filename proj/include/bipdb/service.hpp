#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "bipdb/store.hpp"

namespace bipdb {

// Read-only HTTP/JSON lookup over a ScoreStore.
//
//   GET  /v1/health         -> status, graph id, row count, dump parameters
//   GET  /v1/scores/{doi}   -> the five scores of one DOI (404 when unknown)
//   POST /v1/scores         -> {"dois": [...]}; per-DOI results in request
//                              order, "found" false for misses, never omitted;
//                              400 on an empty or over-cap list or bad JSON
//
// Score values are serialized round-trip exactly, so a served score equals
// the dump value bit for bit. The store is immutable, hence any number of
// concurrent requests is safe.
class ScoreService {
public:
    struct Options {
        std::string host = "127.0.0.1";
        int port = 0; // 0 picks a free port
        uint32_t batch_cap = 1000;
    };

    // The store must outlive the service.
    ScoreService(const ScoreStore& store, Options options);
    ~ScoreService();
    ScoreService(const ScoreService&) = delete;
    ScoreService& operator=(const ScoreService&) = delete;

    // Binds and serves on a background thread; returns the bound port.
    // Throws IoError when the address cannot be bound.
    int start();
    void stop(); // idempotent
    int port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace bipdb
