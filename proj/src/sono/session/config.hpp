#pragma once

#include "sono/agent/transport.hpp"
#include "sono/audio/features.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sono::session {

struct AudioSourceSpec {
    enum class Kind { Live, Wav, Synth };

    Kind kind = Kind::Synth;
    std::filesystem::path wav_path;
    bool loop = true;
    std::vector<audio::ToneComponent> tone{{440.0, 0.5}};
    int sample_rate_hz = audio::kCanonicalSampleRate;
};

/// Everything `serve` needs. Keys accepted by set() mirror the CLI flags.
struct SessionConfig {
    AudioSourceSpec audio;
    std::string bind_address = "0.0.0.0";
    std::uint16_t port = 8765;
    std::filesystem::path registry_path = "scripts.json";
    std::filesystem::path web_root;
    agent::AgentConfig agent;
    double tick_rate_hz = 50.0;
    double frame_rate_hz = 30.0;
    std::uint64_t step_budget = 200'000;

    /// Throws InputError naming the offending setting.
    void validate() const;

    /// Applies one `key=value` setting; unknown keys throw InputError.
    void set(std::string_view key, std::string_view value);

    /// Applies every setting in a key=value file. Blank lines and lines
    /// starting with # are ignored. Throws IoError or ParseError.
    void load_file(const std::filesystem::path& path);
};

/// "440" or "440:0.5,1000:0.3" (frequency:amplitude, amplitude default 0.5).
std::vector<audio::ToneComponent> parse_tone(std::string_view text);

/// Keys understood by SessionConfig::set, for help output.
std::vector<std::string_view> config_keys();

} // namespace sono::session
