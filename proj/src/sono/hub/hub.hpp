#pragma once

#include "sono/hub/wire.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace sono::hub {

using ClientId = std::uint64_t;

/// Per-client outgoing queue. When full, the oldest features or frame
/// message is discarded to make room; other messages are never dropped, so
/// the queue may briefly exceed its capacity with them.
class ClientQueue {
public:
    enum class Kind { Features, Frame, Control };

    explicit ClientQueue(std::size_t capacity = 64);

    void push(Kind kind, std::string payload);
    std::optional<std::string> pop();

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t dropped_features() const { return dropped_features_; }
    std::uint64_t dropped_frames() const { return dropped_frames_; }

private:
    struct Item {
        Kind kind;
        std::string payload;
    };

    void count_drop(Kind kind);

    std::size_t capacity_;
    std::deque<Item> items_;
    std::uint64_t dropped_features_ = 0;
    std::uint64_t dropped_frames_ = 0;
};

struct ClientStats {
    std::size_t queued = 0;
    std::uint64_t dropped_features = 0;
    std::uint64_t dropped_frames = 0;
};

/// What client commands act on. Implemented by the session.
class Controller {
public:
    virtual ~Controller() = default;
    /// False when an authoring run is already in flight.
    virtual bool start_authoring(ClientId client, const std::string& prompt) = 0;
    /// False when no script has that title.
    virtual bool set_draw_ui(const std::string& title, bool value) = 0;
    virtual std::vector<agent::ScriptRecord> list_scripts() = 0;
};

/// Transport-agnostic fan-out: tracks clients, their subscriptions and
/// queues, and turns client payloads into controller calls. Thread-safe.
class Hub {
public:
    /// `wake` is invoked (from any thread) whenever the client's queue
    /// goes from empty to non-empty.
    ClientId connect(std::function<void()> wake = {});
    void disconnect(ClientId client);

    void broadcast(const WireMessage& msg);
    void send(ClientId client, const WireMessage& msg);
    std::optional<std::string> pop(ClientId client);

    /// Decodes and dispatches one text payload; protocol problems are
    /// answered with an error message and the client stays connected.
    void handle_text(ClientId client, std::string_view payload, Controller& controller);
    void handle_command(ClientId client, const WireMessage& msg, Controller& controller);

    std::optional<ClientStats> stats(ClientId client) const;
    std::size_t client_count() const;

private:
    struct Client {
        ClientQueue queue;
        bool features = true;
        bool frames = true;
        std::function<void()> wake;
    };

    void enqueue(Client& client, ClientQueue::Kind kind, const std::string& payload,
                 std::vector<std::function<void()>>& wakes);

    mutable std::mutex mu_;
    std::map<ClientId, Client> clients_;
    ClientId next_id_ = 1;
};

} // namespace sono::hub
