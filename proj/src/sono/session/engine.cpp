#include "sono/session/engine.hpp"

#include "sono/common/error.hpp"
#include "sono/script/compile.hpp"

#include <algorithm>
#include <cmath>

namespace sono::session {
namespace {

constexpr std::size_t kRecentFaults = 16;
constexpr std::string_view kClassification = "unknown";
constexpr double kDistance = 1.0;

} // namespace

Engine::Engine(hub::Hub& hub, const agent::ScriptRegistry& registry, EngineOptions options)
    : hub_(hub), registry_(registry), options_(options)
{
    if (!(options_.tick_rate_hz > 0.0) || !(options_.frame_rate_hz > 0.0))
        throw InputError("tick and frame rates must be positive");
    if (options_.tick_rate_hz < options_.frame_rate_hz)
        throw InputError("tick rate must be at least the frame rate");
    tick_period_ms_ = 1000.0 / options_.tick_rate_hz;
    frame_period_ms_ = 1000.0 / options_.frame_rate_hz;
}

RunningScript* Engine::find_mut(std::string_view key)
{
    auto it = std::find_if(scripts_.begin(), scripts_.end(),
                           [&](const RunningScript& rs) { return agent::same_title(rs.key, key); });
    return it == scripts_.end() ? nullptr : &*it;
}

const RunningScript* Engine::find(std::string_view key) const
{
    return const_cast<Engine*>(this)->find_mut(key);
}

std::optional<script::Diagnostic> Engine::install(std::string key,
                                                  std::shared_ptr<const script::CompiledScript> compiled)
{
    auto made = script::ScriptInstance::create(std::move(compiled), options_.step_budget);
    if (!made.instance)
        return made.diagnostic;
    if (auto* existing = find_mut(key)) {
        existing->instance = std::move(made.instance);
        existing->recent_faults.clear();
        existing->reported.clear();
    } else {
        scripts_.push_back(RunningScript{std::move(key), std::move(made.instance), {}, {}});
    }
    return std::nullopt;
}

void Engine::submit_swap(std::string key, std::shared_ptr<const script::CompiledScript> compiled)
{
    std::lock_guard lock(pending_mu_);
    pending_.emplace_back(std::move(key), std::move(compiled));
}

void Engine::apply_pending_swaps()
{
    decltype(pending_) swaps;
    {
        std::lock_guard lock(pending_mu_);
        swaps.swap(pending_);
    }
    for (auto& [key, compiled] : swaps) {
        if (auto fault = install(key, std::move(compiled)))
            hub_.broadcast(hub::DiagnosticsMsg{key, {*fault}});
    }
}

std::size_t Engine::load_registry_scripts()
{
    std::size_t loaded = 0;
    for (const auto& record : registry_.records()) {
        auto result = script::compile(script::ScriptSource{record.script_content, record.user_prompt});
        if (!result.ok()) {
            hub_.broadcast(hub::DiagnosticsMsg{record.user_prompt, result.diagnostics});
            continue;
        }
        if (auto fault = install(record.user_prompt, result.script)) {
            hub_.broadcast(hub::DiagnosticsMsg{record.user_prompt, {*fault}});
            continue;
        }
        ++loaded;
    }
    return loaded;
}

void Engine::report_fault(RunningScript& rs, const script::Diagnostic& diag)
{
    rs.recent_faults.push_back(diag);
    if (rs.recent_faults.size() > kRecentFaults)
        rs.recent_faults.pop_front();
    // The same fault tends to recur every tick; tell clients once.
    if (rs.reported.emplace(diag.code, diag.pos.line, diag.pos.col).second)
        hub_.broadcast(hub::DiagnosticsMsg{rs.key, {diag}});
}

audio::SoundFeatures Engine::handle_chunk(const audio::AudioChunk& chunk)
{
    const auto features = audio::extract_features(chunk, options_.band);
    ++chunks_;
    hub_.broadcast(hub::FeaturesMsg::from(features));
    for (auto& rs : scripts_) {
        if (auto fault = rs.instance->dispatch_sound(std::string(kClassification), features.normalized, kDistance))
            report_fault(rs, *fault);
    }
    return features;
}

void Engine::run_tick()
{
    apply_pending_swaps();
    ++ticks_;
    const double dt = 1.0 / options_.tick_rate_hz;
    for (auto& rs : scripts_) {
        if (auto fault = rs.instance->tick(dt))
            report_fault(rs, *fault);
    }
}

void Engine::run_frame()
{
    ++frames_;
    hub::FrameMsg frame;
    frame.frame_seq = frames_;
    frame.t_ms = std::llround(static_cast<double>(frames_) * frame_period_ms_);
    for (auto& rs : scripts_) {
        const bool draw = registry_.should_draw(rs.key);
        auto rendered = rs.instance->render(draw);
        if (rendered.diagnostic) {
            report_fault(rs, *rendered.diagnostic);
            continue;
        }
        if (draw)
            frame.scripts.push_back(hub::FrameScript{rs.key, std::move(rendered.commands)});
    }
    if (frame_observer_)
        frame_observer_(frame);
    hub_.broadcast(frame);
}

std::size_t Engine::replay(audio::AudioSource& source, std::size_t max_chunks)
{
    std::size_t consumed = 0;
    std::int64_t end_ms = 0;
    while (consumed < max_chunks) {
        auto chunk = source.next();
        if (!chunk)
            break;
        run_until(static_cast<double>(chunk->timestamp_ms));
        handle_chunk(*chunk);
        end_ms = chunk->timestamp_ms + audio::kChunkMs;
        ++consumed;
    }
    run_until(static_cast<double>(end_ms));
    return consumed;
}

double Engine::next_event_ms() const
{
    return std::min(static_cast<double>(ticks_ + 1) * tick_period_ms_,
                    static_cast<double>(frames_ + 1) * frame_period_ms_);
}

void Engine::run_until(double t_ms)
{
    for (;;) {
        const double next_tick = static_cast<double>(ticks_ + 1) * tick_period_ms_;
        const double next_frame = static_cast<double>(frames_ + 1) * frame_period_ms_;
        // Ordering uses the exact products so coincident events are never
        // split by rounding: tick k and frame j coincide when k * frame_rate
        // equals j * tick_rate.
        const bool tick_first = static_cast<double>(ticks_ + 1) * options_.frame_rate_hz <=
                                static_cast<double>(frames_ + 1) * options_.tick_rate_hz;
        if (tick_first) {
            if (!(next_tick < t_ms))
                return;
            run_tick();
        } else {
            if (!(next_frame < t_ms))
                return;
            run_frame();
        }
    }
}

} // namespace sono::session
