#include "sono/audio/wav.hpp"

#include "sono/common/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

namespace sono::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    void need(std::size_t n) const
    {
        if (remaining() < n)
            throw ParseError("truncated WAV data at byte " + std::to_string(pos_));
    }

    std::uint16_t u16()
    {
        need(2);
        const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i)
            v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
        pos_ += 4;
        return v;
    }

    std::string tag()
    {
        need(4);
        std::string t(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
        pos_ += 4;
        return t;
    }

    std::span<const std::uint8_t> take(std::size_t n)
    {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    void skip(std::size_t n)
    {
        pos_ += std::min(n, remaining());
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

struct FormatChunk {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
};

void put_u16(std::string& out, std::uint16_t v)
{
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

} // namespace

WavData parse_wav(std::span<const std::uint8_t> bytes)
{
    ByteReader in(bytes);
    if (in.remaining() < 12 || in.tag() != "RIFF")
        throw ParseError("not a RIFF file");
    in.u32();
    if (in.tag() != "WAVE")
        throw ParseError("RIFF file is not WAVE");

    std::optional<FormatChunk> fmt;
    std::span<const std::uint8_t> data;
    bool have_data = false;
    while (in.remaining() >= 8) {
        const auto id = in.tag();
        const auto size = in.u32();
        if (id == "fmt ") {
            if (size < 16)
                throw ParseError("WAV fmt chunk is too short");
            const auto body = in.take(size);
            ByteReader f(body);
            FormatChunk c;
            c.format = f.u16();
            c.channels = f.u16();
            c.sample_rate = f.u32();
            f.u32(); // byte rate
            f.u16(); // block align
            c.bits_per_sample = f.u16();
            if (c.format == kFormatExtensible && body.size() >= 26) {
                f.u16(); // cbSize
                f.u16(); // valid bits
                f.u32(); // channel mask
                c.format = f.u16(); // first two bytes of the subformat GUID
            }
            fmt = c;
        } else if (id == "data") {
            const std::size_t n = std::min<std::size_t>(size, in.remaining());
            data = in.take(n);
            have_data = true;
        } else {
            in.skip(size);
        }
        if (size % 2 == 1)
            in.skip(1);
    }
    if (!fmt)
        throw ParseError("WAV file has no fmt chunk");
    if (!have_data)
        throw ParseError("WAV file has no data chunk");
    if (fmt->channels < 1 || fmt->channels > 2)
        throw ParseError("only mono and stereo WAV files are supported, got " + std::to_string(fmt->channels) +
                         " channels");
    if (fmt->sample_rate == 0)
        throw ParseError("WAV sample rate is zero");

    const bool pcm16 = fmt->format == kFormatPcm && fmt->bits_per_sample == 16;
    const bool float32 = fmt->format == kFormatFloat && fmt->bits_per_sample == 32;
    if (!pcm16 && !float32)
        throw ParseError("unsupported WAV encoding (format " + std::to_string(fmt->format) + ", " +
                         std::to_string(fmt->bits_per_sample) + " bits); expected 16-bit PCM or 32-bit float");

    const std::size_t bytes_per_sample = fmt->bits_per_sample / 8;
    const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
    const std::size_t frames = data.size() / frame_bytes;

    WavData wav;
    wav.sample_rate_hz = static_cast<int>(fmt->sample_rate);
    wav.channels.assign(fmt->channels, std::vector<double>(frames));
    for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t ch = 0; ch < fmt->channels; ++ch) {
            const auto* p = data.data() + i * frame_bytes + ch * bytes_per_sample;
            double v = 0.0;
            if (pcm16) {
                const auto raw = static_cast<std::int16_t>(p[0] | (p[1] << 8));
                v = static_cast<double>(raw) / 32768.0;
            } else {
                const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                                           (static_cast<std::uint32_t>(p[2]) << 16) |
                                           (static_cast<std::uint32_t>(p[3]) << 24);
                v = static_cast<double>(std::bit_cast<float>(bits));
                if (!std::isfinite(v))
                    throw ParseError("WAV float sample " + std::to_string(i) + " is not finite");
            }
            wav.channels[ch][i] = v;
        }
    }
    return wav;
}

WavData read_wav(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    if (file.bad())
        throw IoError("failed reading " + path.string());
    return parse_wav(bytes);
}

void write_wav(const std::filesystem::path& path, std::span<const std::vector<double>> channels, int sample_rate_hz,
               WavEncoding encoding)
{
    if (channels.empty() || channels.size() > 2)
        throw InputError("write_wav needs one or two channels");
    const std::size_t frames = channels.front().size();
    for (const auto& ch : channels) {
        if (ch.size() != frames)
            throw InputError("write_wav channel length mismatch");
    }
    if (sample_rate_hz <= 0)
        throw InputError("sample rate must be positive");

    const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
    const auto nch = static_cast<std::uint16_t>(channels.size());
    const std::uint16_t block = static_cast<std::uint16_t>(nch * bits / 8);
    const auto data_bytes = static_cast<std::uint32_t>(frames * block);

    std::string out;
    out.reserve(44 + data_bytes);
    out += "RIFF";
    put_u32(out, 36 + data_bytes);
    out += "WAVEfmt ";
    put_u32(out, 16);
    put_u16(out, encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
    put_u16(out, nch);
    put_u32(out, static_cast<std::uint32_t>(sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(sample_rate_hz) * block);
    put_u16(out, block);
    put_u16(out, bits);
    out += "data";
    put_u32(out, data_bytes);
    for (std::size_t i = 0; i < frames; ++i) {
        for (const auto& ch : channels) {
            const double s = std::clamp(ch[i], -1.0, 1.0);
            if (encoding == WavEncoding::Pcm16) {
                const auto q = static_cast<std::int16_t>(std::lround(s * 32767.0));
                put_u16(out, static_cast<std::uint16_t>(q));
            } else {
                put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
            }
        }
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot create " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file)
        throw IoError("failed writing " + path.string());
}

std::vector<double> mono_mix(const WavData& wav)
{
    if (wav.channels.size() == 1)
        return wav.channels.front();
    if (wav.channels.size() == 2)
        return to_mono(wav.channels[0], wav.channels[1]);
    throw InputError("expected mono or stereo audio");
}

std::vector<AudioChunk> chunk_signal(std::span<const double> mono, int sample_rate_hz)
{
    const std::size_t n = chunk_length(sample_rate_hz);
    const std::size_t count = mono.size() / n;
    std::vector<AudioChunk> chunks;
    chunks.reserve(count);
    for (std::size_t seq = 0; seq < count; ++seq) {
        AudioChunk chunk;
        const auto part = mono.subspan(seq * n, n);
        chunk.samples.assign(part.begin(), part.end());
        chunk.sample_rate_hz = sample_rate_hz;
        chunk.seq = seq;
        chunk.timestamp_ms = static_cast<std::int64_t>(seq) * kChunkMs;
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

std::vector<SoundFeatures> analyze_wav(const std::filesystem::path& path, const BandLimits& band)
{
    const auto wav = read_wav(path);
    validate_band(band, wav.sample_rate_hz);
    const auto mono = mono_mix(wav);
    std::vector<SoundFeatures> out;
    for (const auto& chunk : chunk_signal(mono, wav.sample_rate_hz))
        out.push_back(extract_features(chunk, band));
    return out;
}

} // namespace sono::audio
