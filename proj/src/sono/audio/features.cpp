#include "sono/audio/features.hpp"

#include "sono/audio/fft.hpp"
#include "sono/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sono::audio {
namespace {

void require_finite(std::span<const double> samples)
{
    for (double s : samples) {
        if (!std::isfinite(s))
            throw InputError("audio chunk contains a non-finite sample");
    }
}

SpectrumFrame to_frame(std::span<const double> signal, int sample_rate_hz)
{
    const auto bins = real_dft(signal);
    SpectrumFrame frame;
    frame.frame_length = signal.size();
    frame.bin_resolution_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(signal.size());
    frame.magnitudes.reserve(bins.size());
    for (const auto& c : bins)
        frame.magnitudes.push_back(std::abs(c));
    return frame;
}

} // namespace

std::size_t chunk_length(int sample_rate_hz)
{
    if (sample_rate_hz < 20)
        throw InputError("sample rate must be at least 20 Hz, got " + std::to_string(sample_rate_hz));
    return static_cast<std::size_t>(sample_rate_hz) * kChunkMs / 1000;
}

std::vector<double> to_mono(std::span<const double> left, std::span<const double> right)
{
    if (left.size() != right.size())
        throw InputError("channel length mismatch: " + std::to_string(left.size()) + " vs " +
                         std::to_string(right.size()));
    std::vector<double> mono(left.size());
    for (std::size_t i = 0; i < left.size(); ++i)
        mono[i] = (left[i] + right[i]) / 2.0;
    return mono;
}

std::vector<double> hann_window(std::size_t n)
{
    if (n < 2)
        throw InputError("hann window length must be at least 2");
    std::vector<double> w(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom));
    // Pin exact symmetry; cos() rounding differs slightly between mirrored arguments.
    for (std::size_t i = 0; i < n / 2; ++i)
        w[n - 1 - i] = w[i];
    return w;
}

SpectrumFrame magnitude_spectrum(const AudioChunk& chunk)
{
    if (chunk.samples.empty())
        throw InputError("cannot transform an empty chunk");
    if (chunk.sample_rate_hz <= 0)
        throw InputError("sample rate must be positive");
    require_finite(chunk.samples);

    // A single sample cannot carry a window; treat it as unwindowed.
    if (chunk.samples.size() == 1)
        return to_frame(chunk.samples, chunk.sample_rate_hz);

    const auto window = hann_window(chunk.samples.size());
    std::vector<double> windowed(chunk.samples.size());
    for (std::size_t i = 0; i < windowed.size(); ++i)
        windowed[i] = chunk.samples[i] * window[i];
    return to_frame(windowed, chunk.sample_rate_hz);
}

SpectrumFrame raw_magnitude_spectrum(std::span<const double> samples, int sample_rate_hz)
{
    if (samples.empty())
        throw InputError("cannot transform an empty chunk");
    require_finite(samples);
    return to_frame(samples, sample_rate_hz);
}

void validate_band(const BandLimits& band, int sample_rate_hz)
{
    if (!(band.low_hz > 0.0) || !(band.high_hz > band.low_hz))
        throw InputError("band limits must satisfy 0 < low < high");
    if (!(band.high_hz < static_cast<double>(sample_rate_hz) / 2.0))
        throw InputError("band upper limit " + std::to_string(band.high_hz) + " Hz is not below Nyquist for " +
                         std::to_string(sample_rate_hz) + " Hz");
}

std::optional<double> dominant_frequency(const SpectrumFrame& spectrum, const BandLimits& band)
{
    if (spectrum.magnitudes.empty() || spectrum.bin_resolution_hz <= 0.0)
        return std::nullopt;

    constexpr double kEdgeSlack = 1e-9;
    const double lo = std::ceil(band.low_hz / spectrum.bin_resolution_hz - kEdgeSlack);
    const double hi = std::floor(band.high_hz / spectrum.bin_resolution_hz + kEdgeSlack);
    const auto last_bin = static_cast<double>(spectrum.magnitudes.size() - 1);
    const auto first = static_cast<std::size_t>(std::max(lo, 0.0));
    const auto last = static_cast<std::size_t>(std::min(hi, last_bin));
    if (lo > last_bin || first > last)
        return std::nullopt;

    std::size_t best = first;
    for (std::size_t k = first + 1; k <= last; ++k) {
        if (spectrum.magnitudes[k] > spectrum.magnitudes[best])
            best = k;
    }
    const double length = static_cast<double>(std::max<std::size_t>(spectrum.frame_length, 1));
    if (spectrum.magnitudes[best] / length < kSilenceThreshold)
        return std::nullopt;
    return spectrum.frequency_of(best);
}

double normalize_frequency(double freq_hz, const BandLimits& band)
{
    if (!std::isfinite(freq_hz) || freq_hz <= 0.0)
        throw InputError("frequency must be positive and finite");
    if (!(band.low_hz > 0.0) || !(band.high_hz > band.low_hz))
        throw InputError("band limits must satisfy 0 < low < high");
    const double n = 10.0 * std::log(freq_hz / band.low_hz) / std::log(band.high_hz / band.low_hz);
    return std::clamp(n, 0.0, 10.0);
}

double rms(std::span<const double> samples)
{
    if (samples.empty())
        return 0.0;
    double sum = 0.0;
    for (double s : samples)
        sum += s * s;
    return std::sqrt(sum / static_cast<double>(samples.size()));
}

SoundFeatures extract_features(const AudioChunk& chunk, const BandLimits& band)
{
    validate_band(band, chunk.sample_rate_hz);
    SoundFeatures features;
    features.seq = chunk.seq;
    features.timestamp_ms = chunk.timestamp_ms;
    features.dominant_freq_hz = dominant_frequency(magnitude_spectrum(chunk), band);
    features.normalized = features.dominant_freq_hz ? normalize_frequency(*features.dominant_freq_hz, band) : 0.0;
    features.rms = rms(chunk.samples);
    return features;
}

void validate_tone(std::span<const ToneComponent> components)
{
    double total = 0.0;
    for (const auto& c : components) {
        if (!std::isfinite(c.freq_hz) || c.freq_hz < 0.0)
            throw InputError("tone frequency must be a non-negative finite number");
        if (!std::isfinite(c.amplitude) || c.amplitude < 0.0)
            throw InputError("tone amplitude must be a non-negative finite number");
        total += c.amplitude;
    }
    if (total > 1.0 + 1e-12)
        throw InputError("tone amplitudes sum to " + std::to_string(total) + ", which exceeds 1");
}

std::vector<double> synth_samples(std::span<const ToneComponent> components, std::uint64_t first, std::size_t count,
                                  int sample_rate_hz)
{
    std::vector<double> out(count, 0.0);
    const double rate = static_cast<double>(sample_rate_hz);
    for (const auto& c : components) {
        const double omega = 2.0 * std::numbers::pi * c.freq_hz;
        for (std::size_t i = 0; i < count; ++i) {
            const double t = static_cast<double>(first + i) / rate;
            out[i] += c.amplitude * std::sin(omega * t);
        }
    }
    return out;
}

std::vector<AudioChunk> synth_tone(std::span<const ToneComponent> components, std::int64_t duration_ms,
                                   int sample_rate_hz)
{
    validate_tone(components);
    if (duration_ms < 0)
        throw InputError("duration must be non-negative");
    const std::size_t n = chunk_length(sample_rate_hz);
    const auto chunk_count = static_cast<std::uint64_t>(duration_ms / kChunkMs);

    std::vector<AudioChunk> chunks;
    chunks.reserve(chunk_count);
    for (std::uint64_t seq = 0; seq < chunk_count; ++seq) {
        AudioChunk chunk;
        chunk.samples = synth_samples(components, seq * n, n, sample_rate_hz);
        chunk.sample_rate_hz = sample_rate_hz;
        chunk.seq = seq;
        chunk.timestamp_ms = static_cast<std::int64_t>(seq) * kChunkMs;
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

} // namespace sono::audio
