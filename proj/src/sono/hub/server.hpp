#pragma once

#include "sono/hub/hub.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

namespace sono::hub {

struct ServerOptions {
    std::string address = "0.0.0.0";
    std::uint16_t port = 8765;   // 0 picks a free port
    std::filesystem::path web_root;   // static files for plain HTTP; empty disables
    std::chrono::seconds idle_timeout{30};   // pings go out at half this
};

/// WebSocket endpoint at /stream plus a static file server on the same port.
/// Runs its own I/O thread between start() and stop().
class WsServer {
public:
    WsServer(Hub& hub, Controller& controller, ServerOptions options);
    ~WsServer();

    WsServer(const WsServer&) = delete;
    WsServer& operator=(const WsServer&) = delete;

    /// Binds and starts serving. Throws IoError if the port cannot be bound.
    void start();
    void stop();

    /// Bound port (useful with port 0).
    std::uint16_t port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// MIME type by file extension, "application/octet-stream" otherwise.
std::string_view mime_type(const std::filesystem::path& path);

} // namespace sono::hub
