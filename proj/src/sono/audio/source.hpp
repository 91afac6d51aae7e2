#pragma once

#include "sono/audio/features.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace sono::audio {

class AudioSource {
public:
    virtual ~AudioSource() = default;
    /// Next 100 ms chunk, or empty once the source is exhausted.
    virtual std::optional<AudioChunk> next() = 0;
    virtual int sample_rate_hz() const = 0;
};

class WavSource final : public AudioSource {
public:
    WavSource(const std::filesystem::path& path, bool loop);

    std::optional<AudioChunk> next() override;
    int sample_rate_hz() const override { return sample_rate_hz_; }

private:
    std::vector<double> mono_;
    int sample_rate_hz_ = 0;
    std::size_t chunk_len_ = 0;
    std::size_t cursor_ = 0;
    std::uint64_t seq_ = 0;
    bool loop_ = false;
};

/// Endless sum-of-sines signal.
class SynthSource final : public AudioSource {
public:
    SynthSource(std::vector<ToneComponent> components, int sample_rate_hz = kCanonicalSampleRate);

    std::optional<AudioChunk> next() override;
    int sample_rate_hz() const override { return sample_rate_hz_; }

private:
    std::vector<ToneComponent> components_;
    int sample_rate_hz_;
    std::size_t chunk_len_;
    std::uint64_t seq_ = 0;
};

/// Microphone capture. This build has no capture backend and throws
/// UnsupportedError.
std::unique_ptr<AudioSource> open_live_source(int sample_rate_hz = kCanonicalSampleRate);

/// Bounded single-consumer queue; pushing into a full queue evicts the oldest
/// chunk and counts the drop.
class ChunkQueue {
public:
    explicit ChunkQueue(std::size_t capacity = 8);

    void push(AudioChunk chunk);
    std::optional<AudioChunk> try_pop();
    std::optional<AudioChunk> pop_for(std::chrono::milliseconds timeout);
    void close();

    std::size_t size() const;
    std::uint64_t dropped() const;
    bool closed() const;

private:
    mutable std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<AudioChunk> items_;
    std::size_t capacity_;
    std::uint64_t dropped_ = 0;
    bool closed_ = false;
};

/// Pulls chunks from a source on its own thread at the source's real-time
/// cadence and pushes them into a queue. Closes the queue when the source ends.
class PacedProducer {
public:
    PacedProducer(std::unique_ptr<AudioSource> source, ChunkQueue& queue,
                  std::chrono::milliseconds period = std::chrono::milliseconds(kChunkMs));
    ~PacedProducer();

    PacedProducer(const PacedProducer&) = delete;
    PacedProducer& operator=(const PacedProducer&) = delete;

    void stop();

private:
    void run();

    std::unique_ptr<AudioSource> source_;
    ChunkQueue& queue_;
    std::chrono::milliseconds period_;
    std::mutex mutex_;
    std::condition_variable wake_;
    bool stopping_ = false;
    std::thread thread_;
};

} // namespace sono::audio
