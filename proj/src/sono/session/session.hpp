#pragma once

#include "sono/agent/registry.hpp"
#include "sono/audio/source.hpp"
#include "sono/hub/hub.hpp"
#include "sono/hub/server.hpp"
#include "sono/session/config.hpp"
#include "sono/session/engine.hpp"

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>

namespace sono::session {

/// Opens the configured audio source.
std::unique_ptr<audio::AudioSource> open_source(const AudioSourceSpec& spec);

/// A running `serve`: audio producer, scheduler thread owning the engine,
/// WebSocket server and one authoring worker at a time.
class Session final : public hub::Controller {
public:
    explicit Session(SessionConfig config);
    ~Session() override;

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    /// Loads the registry, opens the source and starts serving. Throws
    /// InputError, IoError, ParseError or UnsupportedError.
    void start();
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

    std::uint16_t port() const;
    hub::Hub& hub() { return hub_; }
    agent::ScriptRegistry& registry() { return *registry_; }
    bool authoring() const { return busy_; }

    bool start_authoring(hub::ClientId client, const std::string& prompt) override;
    bool set_draw_ui(const std::string& title, bool value) override;
    std::vector<agent::ScriptRecord> list_scripts() override;

private:
    void schedule_loop();
    void author_worker(std::string prompt);

    SessionConfig config_;
    hub::Hub hub_;
    std::unique_ptr<agent::ScriptRegistry> registry_;
    std::unique_ptr<Engine> engine_;
    std::unique_ptr<hub::WsServer> server_;
    audio::ChunkQueue chunks_;
    std::unique_ptr<audio::PacedProducer> producer_;

    std::thread scheduler_;
    std::thread author_;
    std::atomic<bool> busy_{false};

    std::mutex state_mu_;
    std::condition_variable state_cv_;
    bool running_ = false;
    bool stopping_ = false;
};

} // namespace sono::session
