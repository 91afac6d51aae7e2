#include "sono/audio/features.hpp"
#include "sono/audio/fft.hpp"
#include "sono/audio/source.hpp"
#include "sono/audio/wav.hpp"
#include "sono/common/error.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace sono;
using namespace sono::audio;

namespace {

AudioChunk chunk_of(std::vector<double> samples, int rate = kCanonicalSampleRate)
{
    AudioChunk c;
    c.samples = std::move(samples);
    c.sample_rate_hz = rate;
    return c;
}

double relative_inf_error(const std::vector<double>& got, const std::vector<double>& want)
{
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        err = std::max(err, std::abs(got[i] - want[i]));
        scale = std::max(scale, std::abs(want[i]));
    }
    return scale == 0.0 ? err : err / scale;
}

} // namespace

TEST_CASE("chunk length is a tenth of a second of samples")
{
    CHECK(chunk_length(48000) == 4800);
    CHECK(chunk_length(44100) == 4410);
    CHECK_THROWS_AS(chunk_length(0), InputError);
}

TEST_CASE("hann window matches the textbook formula")
{
    for (std::size_t n : {2u, 3u, 16u, 101u, 4800u}) {
        const auto got = hann_window(n);
        const auto want = test::reference_hann(n);
        REQUIRE(got.size() == n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-15));
        CHECK(got.front() == 0.0);
    }
}

TEST_CASE("windowed spectrum agrees with a naive DFT")
{
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> len(1, 256);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<double> x(len(rng));
        for (auto& v : x)
            v = amp(rng);
        std::vector<double> windowed = x;
        if (x.size() > 1) {
            const auto w = test::reference_hann(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                windowed[i] *= w[i];
        }
        const auto frame = magnitude_spectrum(chunk_of(x, 8000));
        const auto want = test::naive_dft_magnitudes(windowed);
        REQUIRE(frame.magnitudes.size() == want.size());
        CHECK(frame.frame_length == x.size());
        CHECK(frame.bin_resolution_hz == doctest::Approx(8000.0 / static_cast<double>(x.size())));
        CHECK(relative_inf_error(frame.magnitudes, want) < 1e-9);

        const auto raw = raw_magnitude_spectrum(x, 8000);
        CHECK(relative_inf_error(raw.magnitudes, test::naive_dft_magnitudes(x)) < 1e-9);
    }
}

TEST_CASE("real_dft handles odd and prime lengths")
{
    for (std::size_t n : {1u, 7u, 97u, 4410u}) {
        std::vector<double> x = test::reference_tone({{300.0, 0.4}, {1234.0, 0.2}}, n, 44100);
        const auto bins = real_dft(x);
        REQUIRE(bins.size() == n / 2 + 1);
        if (n <= 97) {
            const auto want = test::naive_dft_magnitudes(x);
            for (std::size_t k = 0; k < bins.size(); ++k)
                CHECK(std::abs(bins[k]) == doctest::Approx(want[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("spectrum rejects empty or non-finite input")
{
    CHECK_THROWS_AS(magnitude_spectrum(chunk_of({})), InputError);
    CHECK_THROWS_AS(magnitude_spectrum(chunk_of({0.0, NAN, 0.0})), InputError);
    CHECK_THROWS_AS(magnitude_spectrum(chunk_of({0.0, 1.0}, 0)), InputError);
}

TEST_CASE("a 440 Hz tone lands exactly on the 440 Hz bin in every chunk")
{
    const auto chunks = synth_tone(std::vector<ToneComponent>{{440.0, 0.5}}, 2000);
    REQUIRE(chunks.size() == 20);
    for (const auto& c : chunks) {
        const auto f = extract_features(c);
        REQUIRE(f.dominant_freq_hz.has_value());
        CHECK(*f.dominant_freq_hz == 440.0);
    }
}

TEST_CASE("a tone between bins resolves to a neighbouring bin")
{
    for (const auto& c : synth_tone(std::vector<ToneComponent>{{445.0, 0.5}}, 1000)) {
        const auto f = extract_features(c);
        REQUIRE(f.dominant_freq_hz.has_value());
        CHECK((*f.dominant_freq_hz == 440.0 || *f.dominant_freq_hz == 450.0));
    }
}

TEST_CASE("energy outside the band is ignored")
{
    // 10 Hz rumble at amplitude 0.5: its window leakage into the 20 Hz bin
    // stays below the 1000 Hz peak.
    const std::vector<ToneComponent> tone{{10.0, 0.5}, {1000.0, 0.3}};
    for (const auto& c : synth_tone(tone, 1000))
        CHECK(extract_features(c).dominant_freq_hz == std::optional<double>(1000.0));

    const std::vector<ToneComponent> high{{9000.0, 0.6}, {2000.0, 0.2}};
    for (const auto& c : synth_tone(high, 500))
        CHECK(extract_features(c).dominant_freq_hz == std::optional<double>(2000.0));
}

TEST_CASE("strong rumble leaks into the lowest in-band bin exactly as the oracle predicts")
{
    // Full-scale 10 Hz plus 0.3 at 1000 Hz. The Hann main lobe spans two
    // bins, so half of the 10 Hz peak lands on the 20 Hz bin, which is in
    // band. The naive DFT of the windowed chunk decides the expected bin.
    const auto x = test::reference_tone({{10.0, 1.0}, {1000.0, 0.3}}, 4800, 48000);
    auto windowed = x;
    const auto w = test::reference_hann(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        windowed[i] *= w[i];
    const auto mags = test::naive_dft_magnitudes(windowed);
    std::size_t best = 2;
    for (std::size_t k = 3; k <= 800; ++k) {
        if (mags[k] > mags[best])
            best = k;
    }
    CHECK(mags[2] > mags[100]);
    const auto f = extract_features(chunk_of(x));
    CHECK(f.dominant_freq_hz == std::optional<double>(static_cast<double>(best) * 10.0));
}

TEST_CASE("ties go to the lower bin")
{
    SpectrumFrame frame;
    frame.bin_resolution_hz = 10.0;
    frame.frame_length = 100;
    frame.magnitudes.assign(51, 0.0);
    frame.magnitudes[5] = 3.0;
    frame.magnitudes[9] = 3.0;
    CHECK(dominant_frequency(frame, BandLimits{20.0, 400.0}) == std::optional<double>(50.0));
}

TEST_CASE("silence has no dominant frequency and normalizes to zero")
{
    const auto f = extract_features(chunk_of(std::vector<double>(4800, 0.0)));
    CHECK_FALSE(f.dominant_freq_hz.has_value());
    CHECK(f.normalized == 0.0);
    CHECK(f.rms == 0.0);
}

TEST_CASE("frequency normalization is logarithmic over the band")
{
    // Band edges map to the ends of the scale and the geometric mean of
    // 20 and 8000 Hz (400 Hz) to its middle.
    CHECK(std::abs(normalize_frequency(20.0) - 0.0) < 1e-9);
    CHECK(std::abs(normalize_frequency(8000.0) - 10.0) < 1e-9);
    CHECK(std::abs(normalize_frequency(400.0) - 5.0) < 1e-9);
    CHECK(normalize_frequency(5.0) == 0.0);
    CHECK(normalize_frequency(20000.0) == 10.0);
    CHECK(normalize_frequency(440.0) == doctest::Approx(10.0 * std::log(22.0) / std::log(400.0)).epsilon(1e-14));
    CHECK_THROWS_AS(normalize_frequency(0.0), InputError);
    CHECK_THROWS_AS(normalize_frequency(NAN), InputError);
}

TEST_CASE("band validation")
{
    CHECK_NOTHROW(validate_band(BandLimits{}, 48000));
    CHECK_THROWS_AS(validate_band(BandLimits{20.0, 8000.0}, 16000), InputError);
    CHECK_THROWS_AS(validate_band(BandLimits{100.0, 50.0}, 48000), InputError);
    CHECK_THROWS_AS(extract_features(chunk_of(std::vector<double>(1600, 0.1), 16000)), InputError);
}

TEST_CASE("rms and mono mixing")
{
    const auto x = test::reference_tone({{1000.0, 0.8}}, 4800, 48000);
    CHECK(rms(x) == doctest::Approx(0.8 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rms(std::vector<double>{}) == 0.0);

    const std::vector<double> l{1.0, 0.0, -1.0};
    const std::vector<double> r{0.0, 0.5, 1.0};
    CHECK(to_mono(l, r) == std::vector<double>{0.5, 0.25, 0.0});
    CHECK_THROWS_AS(to_mono(l, std::vector<double>{1.0}), InputError);
}

TEST_CASE("synthesized tones are continuous across chunks")
{
    const std::vector<ToneComponent> tone{{440.0, 0.3}, {1000.0, 0.2}};
    const auto chunks = synth_tone(tone, 300);
    REQUIRE(chunks.size() == 3);
    const auto want = test::reference_tone({{440.0, 0.3}, {1000.0, 0.2}}, 4800, 48000, 9600);
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(chunks[2].samples[i] == doctest::Approx(want[i]).epsilon(1e-12));
    CHECK(chunks[2].seq == 2);
    CHECK(chunks[2].timestamp_ms == 200);
    CHECK_THROWS_AS(synth_tone(std::vector<ToneComponent>{{440.0, 0.7}, {500.0, 0.7}}, 100), InputError);
}

TEST_CASE("wav files round-trip and decode from an independent writer")
{
    test::TempDir dir("wav");
    const auto tone = test::reference_tone({{440.0, 0.5}}, 48000, 48000);

    test::write_pcm16_wav(dir / "oracle.wav", tone, 48000);
    const auto oracle = read_wav(dir / "oracle.wav");
    CHECK(oracle.sample_rate_hz == 48000);
    REQUIRE(oracle.frame_count() == tone.size());
    for (std::size_t i = 0; i < tone.size(); i += 997)
        CHECK(oracle.channels[0][i] == doctest::Approx(tone[i]).epsilon(1e-4));

    const std::vector<std::vector<double>> stereo{tone, std::vector<double>(tone.size(), 0.0)};
    write_wav(dir / "float.wav", stereo, 48000, WavEncoding::Float32);
    const auto f = read_wav(dir / "float.wav");
    REQUIRE(f.channels.size() == 2);
    CHECK(f.channels[0][1234] == doctest::Approx(tone[1234]).epsilon(1e-7));
    CHECK(mono_mix(f)[1234] == doctest::Approx(tone[1234] / 2).epsilon(1e-7));

    CHECK_THROWS_AS(read_wav(dir / "missing.wav"), IoError);
    const std::vector<std::uint8_t> junk{'R', 'I', 'F', 'F', 1, 2, 3};
    CHECK_THROWS_AS(parse_wav(junk), ParseError);
}

TEST_CASE("analysis emits one record per whole chunk")
{
    test::TempDir dir("analyze");
    test::write_pcm16_wav(dir / "t.wav", test::reference_tone({{440.0, 0.5}}, 48000 + 2000, 48000), 48000);
    const auto records = analyze_wav(dir / "t.wav");
    REQUIRE(records.size() == 10);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].seq == i);
        CHECK(records[i].timestamp_ms == static_cast<std::int64_t>(i) * 100);
        CHECK(records[i].dominant_freq_hz == std::optional<double>(440.0));
    }
}

TEST_CASE("wav source loops and stops")
{
    test::TempDir dir("source");
    test::write_pcm16_wav(dir / "t.wav", test::reference_tone({{440.0, 0.5}}, 9600, 48000), 48000);

    WavSource once(dir / "t.wav", false);
    CHECK(once.next().has_value());
    CHECK(once.next().has_value());
    CHECK_FALSE(once.next().has_value());

    WavSource looping(dir / "t.wav", true);
    for (int i = 0; i < 5; ++i) {
        auto c = looping.next();
        REQUIRE(c.has_value());
        CHECK(c->seq == static_cast<std::uint64_t>(i));
        CHECK(c->timestamp_ms == i * 100);
    }
}

TEST_CASE("live capture is reported as unsupported")
{
    CHECK_THROWS_AS(open_live_source(), UnsupportedError);
}

TEST_CASE("chunk queue evicts the oldest chunk when full")
{
    ChunkQueue q(2);
    for (std::uint64_t i = 0; i < 5; ++i) {
        AudioChunk c;
        c.seq = i;
        q.push(std::move(c));
    }
    CHECK(q.size() == 2);
    CHECK(q.dropped() == 3);
    CHECK(q.try_pop()->seq == 3);
    CHECK(q.try_pop()->seq == 4);
    CHECK_FALSE(q.try_pop().has_value());
    q.close();
    CHECK(q.closed());
    CHECK_FALSE(q.pop_for(std::chrono::milliseconds(1000)).has_value());
}

TEST_CASE("paced producer delivers chunks in order")
{
    ChunkQueue q(8);
    PacedProducer producer(std::make_unique<SynthSource>(std::vector<ToneComponent>{{440.0, 0.5}}), q,
                           std::chrono::milliseconds(5));
    std::vector<std::uint64_t> seqs;
    while (seqs.size() < 4) {
        auto c = q.pop_for(std::chrono::milliseconds(1000));
        REQUIRE(c.has_value());
        seqs.push_back(c->seq);
    }
    producer.stop();
    CHECK(seqs == std::vector<std::uint64_t>{0, 1, 2, 3});
}
