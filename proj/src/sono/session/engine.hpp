#pragma once

#include "sono/agent/registry.hpp"
#include "sono/audio/features.hpp"
#include "sono/audio/source.hpp"
#include "sono/hub/hub.hpp"
#include "sono/script/instance.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace sono::session {

struct EngineOptions {
    double tick_rate_hz = 50.0;
    double frame_rate_hz = 30.0;
    std::uint64_t step_budget = script::kDefaultStepBudget;
    audio::BandLimits band;
};

struct RunningScript {
    std::string key;   // registry title (the authoring prompt)
    std::unique_ptr<script::ScriptInstance> instance;
    std::deque<script::Diagnostic> recent_faults;   // newest last, bounded
    std::set<std::tuple<script::DiagCode, int, int>> reported;
};

/// The scheduler-owned half of a session: script instances on a virtual
/// clock. Ticks fall at k / tick_rate and frames at k / frame_rate seconds
/// (k = 1, 2, ...); when both are due at once the tick runs first. Not
/// thread-safe except submit_swap().
class Engine {
public:
    Engine(hub::Hub& hub, const agent::ScriptRegistry& registry, EngineOptions options = {});

    /// Instantiates and adds (or replaces, by case-insensitive key) a script
    /// now. Returns the fault of a default that failed; the old instance is
    /// kept in that case.
    std::optional<script::Diagnostic> install(std::string key, std::shared_ptr<const script::CompiledScript> script);

    /// Queues a replacement for the next tick boundary. Callable from any
    /// thread.
    void submit_swap(std::string key, std::shared_ptr<const script::CompiledScript> script);

    /// Compiles and installs every registry record. Records that fail are
    /// skipped and reported through the hub; returns how many were loaded.
    std::size_t load_registry_scripts();

    /// Extracts and broadcasts features, then feeds the normalized frequency
    /// to every script.
    audio::SoundFeatures handle_chunk(const audio::AudioChunk& chunk);

    /// Runs every tick and frame scheduled strictly before t_ms.
    void run_until(double t_ms);

    /// Drives the clock from a source instead of wall time: each chunk is
    /// handled at its timestamp, after the events due before it. Stops after
    /// max_chunks or when the source ends, then runs the events of the final
    /// chunk period. Returns the number of chunks consumed.
    std::size_t replay(audio::AudioSource& source, std::size_t max_chunks);

    /// Time of the next scheduled tick or frame.
    double next_event_ms() const;

    void set_frame_observer(std::function<void(const hub::FrameMsg&)> observer) { frame_observer_ = std::move(observer); }

    const std::vector<RunningScript>& scripts() const { return scripts_; }
    const RunningScript* find(std::string_view key) const;
    std::uint64_t ticks() const { return ticks_; }
    std::uint64_t frames() const { return frames_; }
    std::uint64_t chunks() const { return chunks_; }

private:
    void apply_pending_swaps();
    void run_tick();
    void run_frame();
    void report_fault(RunningScript& rs, const script::Diagnostic& diag);
    RunningScript* find_mut(std::string_view key);

    hub::Hub& hub_;
    const agent::ScriptRegistry& registry_;
    EngineOptions options_;
    double tick_period_ms_;
    double frame_period_ms_;
    std::vector<RunningScript> scripts_;
    std::uint64_t ticks_ = 0;
    std::uint64_t frames_ = 0;
    std::uint64_t chunks_ = 0;
    std::function<void(const hub::FrameMsg&)> frame_observer_;

    std::mutex pending_mu_;
    std::vector<std::pair<std::string, std::shared_ptr<const script::CompiledScript>>> pending_;
};

} // namespace sono::session
