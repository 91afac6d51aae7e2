#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sono::audio {

inline constexpr int kCanonicalSampleRate = 48000;
inline constexpr int kChunkMs = 100;

/// Peak in-band magnitude (divided by the chunk length) below which a chunk
/// counts as silent.
inline constexpr double kSilenceThreshold = 1e-6;

struct AudioChunk {
    std::vector<double> samples;
    int sample_rate_hz = kCanonicalSampleRate;
    std::uint64_t seq = 0;
    std::int64_t timestamp_ms = 0;
};

struct SpectrumFrame {
    double bin_resolution_hz = 0.0;
    std::size_t frame_length = 0;      // N, the transformed sample count
    std::vector<double> magnitudes;    // floor(N/2) + 1 bins

    double frequency_of(std::size_t bin) const { return static_cast<double>(bin) * bin_resolution_hz; }
};

struct BandLimits {
    double low_hz = 20.0;
    double high_hz = 8000.0;
};

struct SoundFeatures {
    std::optional<double> dominant_freq_hz;
    double normalized = 0.0;
    double rms = 0.0;
    std::uint64_t seq = 0;
    std::int64_t timestamp_ms = 0;
};

struct ToneComponent {
    double freq_hz = 0.0;
    double amplitude = 0.0;
};

/// Samples per canonical 100 ms chunk at the given rate.
std::size_t chunk_length(int sample_rate_hz);

std::vector<double> to_mono(std::span<const double> left, std::span<const double> right);

/// Symmetric Hann window, w[i] = 0.5 (1 - cos(2 pi i / (n - 1))).
std::vector<double> hann_window(std::size_t n);

/// Hann-windowed magnitude spectrum over the exact chunk length.
SpectrumFrame magnitude_spectrum(const AudioChunk& chunk);

/// Same transform without the window; used to compare leakage.
SpectrumFrame raw_magnitude_spectrum(std::span<const double> samples, int sample_rate_hz);

void validate_band(const BandLimits& band, int sample_rate_hz);

/// Frequency of the strongest bin inside [low_hz, high_hz]. Ties go to the
/// lower bin. Empty when the chunk is silent in that band.
std::optional<double> dominant_frequency(const SpectrumFrame& spectrum, const BandLimits& band = {});

/// 10 ln(f / low) / ln(high / low), clamped to [0, 10].
double normalize_frequency(double freq_hz, const BandLimits& band = {});

double rms(std::span<const double> samples);

SoundFeatures extract_features(const AudioChunk& chunk, const BandLimits& band = {});

/// Samples [first, first + count) of the continuous sum-of-sines signal.
std::vector<double> synth_samples(std::span<const ToneComponent> components, std::uint64_t first, std::size_t count,
                                  int sample_rate_hz);

void validate_tone(std::span<const ToneComponent> components);

/// Sum of sines split into 100 ms chunks. Amplitudes must sum to at most 1.
std::vector<AudioChunk> synth_tone(std::span<const ToneComponent> components, std::int64_t duration_ms,
                                   int sample_rate_hz = kCanonicalSampleRate);

} // namespace sono::audio
