#include "sono/session/session.hpp"

#include "sono/agent/pipeline.hpp"
#include "sono/common/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace sono::session {

std::unique_ptr<audio::AudioSource> open_source(const AudioSourceSpec& spec)
{
    switch (spec.kind) {
    case AudioSourceSpec::Kind::Live: return audio::open_live_source(spec.sample_rate_hz);
    case AudioSourceSpec::Kind::Wav: return std::make_unique<audio::WavSource>(spec.wav_path, spec.loop);
    case AudioSourceSpec::Kind::Synth: return std::make_unique<audio::SynthSource>(spec.tone, spec.sample_rate_hz);
    }
    throw InputError("unknown audio source kind");
}

Session::Session(SessionConfig config) : config_(std::move(config)) {}

Session::~Session()
{
    stop();
}

void Session::start()
{
    {
        std::lock_guard lock(state_mu_);
        if (running_)
            return;
    }
    config_.validate();
    registry_ = std::make_unique<agent::ScriptRegistry>(config_.registry_path);
    engine_ = std::make_unique<Engine>(
        hub_, *registry_,
        EngineOptions{config_.tick_rate_hz, config_.frame_rate_hz, config_.step_budget, audio::BandLimits{}});
    engine_->load_registry_scripts();
    auto source = open_source(config_.audio);

    server_ = std::make_unique<hub::WsServer>(
        hub_, *this, hub::ServerOptions{config_.bind_address, config_.port, config_.web_root, std::chrono::seconds(30)});
    server_->start();

    {
        std::lock_guard lock(state_mu_);
        running_ = true;
        stopping_ = false;
    }
    producer_ = std::make_unique<audio::PacedProducer>(std::move(source), chunks_);
    scheduler_ = std::thread([this] { schedule_loop(); });
}

void Session::schedule_loop()
{
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(clock::now() - started).count(); };

    for (;;) {
        {
            std::lock_guard lock(state_mu_);
            if (stopping_)
                return;
        }
        const double wait = std::clamp(engine_->next_event_ms() - elapsed_ms(), 0.0, 50.0);
        const auto timeout = std::chrono::milliseconds(static_cast<long>(std::ceil(wait)));
        if (chunks_.closed() && chunks_.size() == 0) {
            std::unique_lock lock(state_mu_);
            state_cv_.wait_for(lock, timeout, [this] { return stopping_; });
        } else if (auto chunk = chunks_.pop_for(timeout)) {
            engine_->handle_chunk(*chunk);
        }
        engine_->run_until(elapsed_ms());
    }
}

void Session::stop()
{
    {
        std::lock_guard lock(state_mu_);
        if (!running_)
            return;
        stopping_ = true;
    }
    state_cv_.notify_all();
    if (producer_)
        producer_->stop();
    chunks_.close();
    if (scheduler_.joinable())
        scheduler_.join();
    if (server_)
        server_->stop();
    if (author_.joinable())
        author_.join();
    {
        std::lock_guard lock(state_mu_);
        running_ = false;
    }
    state_cv_.notify_all();
}

void Session::wait()
{
    std::unique_lock lock(state_mu_);
    state_cv_.wait(lock, [this] { return !running_ || stopping_; });
}

std::uint16_t Session::port() const
{
    return server_ ? server_->port() : 0;
}

bool Session::start_authoring(hub::ClientId, const std::string& prompt)
{
    bool expected = false;
    if (!busy_.compare_exchange_strong(expected, true))
        return false;
    if (author_.joinable())
        author_.join();
    author_ = std::thread([this, prompt] { author_worker(prompt); });
    return true;
}

void Session::author_worker(std::string prompt)
{
    try {
        auto transport = agent::make_transport(config_.agent);
        agent::AgentPipeline pipeline(*transport, config_.agent);
        auto result = pipeline.author(prompt, *registry_, [this](agent::Phase phase, const std::string& detail) {
            hub_.broadcast(hub::AuthorStatusMsg{std::string(agent::phase_name(phase)), detail});
        });
        if (result.success) {
            engine_->submit_swap(prompt, result.script);
            hub_.broadcast(hub::ScriptListMsg{registry_->records()});
        } else if (!result.diagnostics.empty()) {
            hub_.broadcast(hub::DiagnosticsMsg{prompt, result.diagnostics});
        }
    } catch (const std::exception& e) {
        hub_.broadcast(hub::AuthorStatusMsg{"failed", e.what()});
    }
    busy_ = false;
}

bool Session::set_draw_ui(const std::string& title, bool value)
{
    try {
        return registry_->set_draw_ui(title, value);
    } catch (const IoError&) {
        return false;
    }
}

std::vector<agent::ScriptRecord> Session::list_scripts()
{
    return registry_->records();
}

} // namespace sono::session
