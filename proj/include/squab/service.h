#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace squab {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    /// 0 binds an ephemeral port.
    int port = 8750;
    /// Largest accepted trials-per-point for benchmark jobs.
    std::uint64_t trial_cap = 1'000'000;
    /// Request bodies above this many bytes get 413.
    std::size_t body_limit = 16u << 20;
    std::size_t max_concurrent_jobs = 8;
    /// Benchmark workers per job; 0 picks default_workers().
    unsigned workers_per_job = 0;
};

/// Local HTTP API: lattice validation and reports, generators, and
/// asynchronous benchmark jobs held in memory.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds the listening socket and returns the bound port. Throws
    /// std::runtime_error when the address is unavailable.
    int bind();
    /// Serves until stop(); bind() must have succeeded.
    void listen();
    /// bind() plus listen() on a background thread; returns the port once
    /// the server accepts connections.
    int start();
    /// Stops accepting requests, cancels outstanding jobs and joins every
    /// thread. Safe to call more than once.
    void stop();

    int port() const;
    const ServiceConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace squab
