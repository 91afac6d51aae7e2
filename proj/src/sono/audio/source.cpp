#include "sono/audio/source.hpp"

#include "sono/audio/wav.hpp"
#include "sono/common/error.hpp"

namespace sono::audio {

WavSource::WavSource(const std::filesystem::path& path, bool loop) : loop_(loop)
{
    const auto wav = read_wav(path);
    sample_rate_hz_ = wav.sample_rate_hz;
    chunk_len_ = chunk_length(sample_rate_hz_);
    mono_ = mono_mix(wav);
    if (loop_ && mono_.size() < chunk_len_)
        throw InputError("looping WAV source needs at least one full 100 ms chunk");
}

std::optional<AudioChunk> WavSource::next()
{
    if (cursor_ + chunk_len_ > mono_.size()) {
        if (!loop_)
            return std::nullopt;
        cursor_ = 0;
    }
    AudioChunk chunk;
    chunk.samples.assign(mono_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                         mono_.begin() + static_cast<std::ptrdiff_t>(cursor_ + chunk_len_));
    chunk.sample_rate_hz = sample_rate_hz_;
    chunk.seq = seq_;
    chunk.timestamp_ms = static_cast<std::int64_t>(seq_) * kChunkMs;
    cursor_ += chunk_len_;
    ++seq_;
    return chunk;
}

SynthSource::SynthSource(std::vector<ToneComponent> components, int sample_rate_hz)
    : components_(std::move(components)), sample_rate_hz_(sample_rate_hz), chunk_len_(chunk_length(sample_rate_hz))
{
    validate_tone(components_);
}

std::optional<AudioChunk> SynthSource::next()
{
    AudioChunk chunk;
    chunk.samples = synth_samples(components_, seq_ * chunk_len_, chunk_len_, sample_rate_hz_);
    chunk.sample_rate_hz = sample_rate_hz_;
    chunk.seq = seq_;
    chunk.timestamp_ms = static_cast<std::int64_t>(seq_) * kChunkMs;
    ++seq_;
    return chunk;
}

std::unique_ptr<AudioSource> open_live_source(int /*sample_rate_hz*/)
{
    throw UnsupportedError("live audio capture is not available in this build; use a wav or synth source");
}

ChunkQueue::ChunkQueue(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

void ChunkQueue::push(AudioChunk chunk)
{
    {
        std::lock_guard lock(mutex_);
        if (closed_)
            return;
        if (items_.size() >= capacity_) {
            items_.pop_front();
            ++dropped_;
        }
        items_.push_back(std::move(chunk));
    }
    ready_.notify_one();
}

std::optional<AudioChunk> ChunkQueue::try_pop()
{
    std::lock_guard lock(mutex_);
    if (items_.empty())
        return std::nullopt;
    auto chunk = std::move(items_.front());
    items_.pop_front();
    return chunk;
}

std::optional<AudioChunk> ChunkQueue::pop_for(std::chrono::milliseconds timeout)
{
    std::unique_lock lock(mutex_);
    ready_.wait_for(lock, timeout, [this] { return !items_.empty() || closed_; });
    if (items_.empty())
        return std::nullopt;
    auto chunk = std::move(items_.front());
    items_.pop_front();
    return chunk;
}

void ChunkQueue::close()
{
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    ready_.notify_all();
}

std::size_t ChunkQueue::size() const
{
    std::lock_guard lock(mutex_);
    return items_.size();
}

std::uint64_t ChunkQueue::dropped() const
{
    std::lock_guard lock(mutex_);
    return dropped_;
}

bool ChunkQueue::closed() const
{
    std::lock_guard lock(mutex_);
    return closed_;
}

PacedProducer::PacedProducer(std::unique_ptr<AudioSource> source, ChunkQueue& queue, std::chrono::milliseconds period)
    : source_(std::move(source)), queue_(queue), period_(period), thread_([this] { run(); })
{
}

PacedProducer::~PacedProducer()
{
    stop();
}

void PacedProducer::stop()
{
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    wake_.notify_all();
    if (thread_.joinable())
        thread_.join();
}

void PacedProducer::run()
{
    auto deadline = std::chrono::steady_clock::now();
    while (true) {
        auto chunk = source_->next();
        if (!chunk)
            break;
        queue_.push(std::move(*chunk));
        deadline += period_;
        std::unique_lock lock(mutex_);
        if (wake_.wait_until(lock, deadline, [this] { return stopping_; }))
            return;
    }
    queue_.close();
}

} // namespace sono::audio
