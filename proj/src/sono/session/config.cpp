#include "sono/session/config.hpp"

#include "sono/common/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace sono::session {
namespace {

constexpr std::array<std::string_view, 19> kKeys = {
    "source",        "wav",        "loop",           "tone",        "sample-rate", "port",
    "bind",          "registry",   "web-root",       "agent-mode",  "endpoint",    "model",
    "api-key-env",   "mock-dir",   "max-iterations", "timeout-ms",  "tick-rate",   "frame-rate",
    "step-budget",
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    T out{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw InputError("setting '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out))
            throw InputError("setting '" + std::string(key) + "' must be finite");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    throw InputError("setting '" + std::string(key) + "' expects true or false, got '" + std::string(text) + "'");
}

} // namespace

std::vector<audio::ToneComponent> parse_tone(std::string_view text)
{
    std::vector<audio::ToneComponent> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view part = trim(text.substr(0, comma));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (part.empty())
            throw InputError("empty tone component");
        audio::ToneComponent c{0.0, 0.5};
        const auto colon = part.find(':');
        c.freq_hz = parse_number<double>("tone", trim(part.substr(0, colon)));
        if (colon != std::string_view::npos)
            c.amplitude = parse_number<double>("tone", trim(part.substr(colon + 1)));
        out.push_back(c);
    }
    if (out.empty())
        throw InputError("tone needs at least one frequency");
    audio::validate_tone(out);
    return out;
}

std::vector<std::string_view> config_keys()
{
    return {kKeys.begin(), kKeys.end()};
}

void SessionConfig::validate() const
{
    if (!(tick_rate_hz > 0.0) || !(frame_rate_hz > 0.0))
        throw InputError("tick-rate and frame-rate must be positive");
    if (tick_rate_hz < frame_rate_hz)
        throw InputError("tick-rate must be at least frame-rate");
    if (step_budget == 0)
        throw InputError("step-budget must be positive");
    if (audio.kind == AudioSourceSpec::Kind::Wav && audio.wav_path.empty())
        throw InputError("source=wav needs a wav path");
    if (audio.kind == AudioSourceSpec::Kind::Synth)
        audio::validate_tone(audio.tone);
    if (audio.sample_rate_hz <= 0)
        throw InputError("sample-rate must be positive");
    agent.validate();
}

void SessionConfig::set(std::string_view key, std::string_view value)
{
    value = trim(value);
    if (key == "source") {
        if (value == "live")
            audio.kind = AudioSourceSpec::Kind::Live;
        else if (value == "wav")
            audio.kind = AudioSourceSpec::Kind::Wav;
        else if (value == "synth")
            audio.kind = AudioSourceSpec::Kind::Synth;
        else
            throw InputError("source must be live, wav or synth, got '" + std::string(value) + "'");
    } else if (key == "wav") {
        audio.kind = AudioSourceSpec::Kind::Wav;
        audio.wav_path = std::string(value);
    } else if (key == "loop") {
        audio.loop = parse_bool(key, value);
    } else if (key == "tone") {
        audio.kind = AudioSourceSpec::Kind::Synth;
        audio.tone = parse_tone(value);
    } else if (key == "sample-rate") {
        audio.sample_rate_hz = parse_number<int>(key, value);
    } else if (key == "port") {
        const int p = parse_number<int>(key, value);
        if (p < 0 || p > std::numeric_limits<std::uint16_t>::max())
            throw InputError("port out of range: " + std::string(value));
        port = static_cast<std::uint16_t>(p);
    } else if (key == "bind") {
        bind_address = std::string(value);
    } else if (key == "registry") {
        registry_path = std::string(value);
    } else if (key == "web-root") {
        web_root = std::string(value);
    } else if (key == "agent-mode") {
        if (value == "mock")
            agent.mode = agent::AgentConfig::Mode::Mock;
        else if (value == "live")
            agent.mode = agent::AgentConfig::Mode::Live;
        else
            throw InputError("agent-mode must be mock or live, got '" + std::string(value) + "'");
    } else if (key == "endpoint") {
        agent.endpoint = std::string(value);
    } else if (key == "model") {
        agent.model_id = std::string(value);
    } else if (key == "api-key-env") {
        agent.api_key_env = std::string(value);
    } else if (key == "mock-dir") {
        agent.mock_fixture_dir = std::string(value);
    } else if (key == "max-iterations") {
        agent.max_repair_iterations = parse_number<int>(key, value);
    } else if (key == "timeout-ms") {
        agent.request_timeout = std::chrono::milliseconds(parse_number<long long>(key, value));
    } else if (key == "tick-rate") {
        tick_rate_hz = parse_number<double>(key, value);
    } else if (key == "frame-rate") {
        frame_rate_hz = parse_number<double>(key, value);
    } else if (key == "step-budget") {
        step_budget = parse_number<std::uint64_t>(key, value);
    } else {
        throw InputError("unknown setting '" + std::string(key) + "'");
    }
}

void SessionConfig::load_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(path.string() + ":" + std::to_string(number) + ": expected key=value");
        try {
            set(trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const InputError& e) {
            throw ParseError(path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

} // namespace sono::session
