#pragma once

#include "sono/audio/features.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sono::audio {

struct WavData {
    int sample_rate_hz = 0;
    std::vector<std::vector<double>> channels;

    std::size_t frame_count() const { return channels.empty() ? 0 : channels.front().size(); }
};

enum class WavEncoding { Pcm16, Float32 };

/// Accepts 16-bit PCM or 32-bit IEEE float, mono or stereo.
WavData parse_wav(std::span<const std::uint8_t> bytes);
WavData read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, std::span<const std::vector<double>> channels, int sample_rate_hz,
               WavEncoding encoding = WavEncoding::Pcm16);

std::vector<double> mono_mix(const WavData& wav);

/// Splits a mono signal into non-overlapping chunks of sample_rate/10 samples;
/// a trailing partial chunk is dropped.
std::vector<AudioChunk> chunk_signal(std::span<const double> mono, int sample_rate_hz);

std::vector<SoundFeatures> analyze_wav(const std::filesystem::path& path, const BandLimits& band = {});

} // namespace sono::audio
