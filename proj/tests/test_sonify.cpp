#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "qvts/features.hpp"
#include "qvts/sonify.hpp"
#include "qvts/stft.hpp"

using namespace qvts;

namespace {

const double kSr = 44100.0;

double rms(const std::vector<double>& v) {
  double acc = 0.0;
  for (double s : v) acc += s * s;
  return std::sqrt(acc / std::max<std::size_t>(v.size(), 1));
}

double peak_freq(const AudioBuffer& a) {
  const Spectrogram spec = stft(a, StftConfig{});
  const auto mag = spec.magnitude(spec.num_frames() / 2);
  const auto it = std::max_element(mag.begin(), mag.end());
  return spec.bin_freq(static_cast<double>(it - mag.begin()));
}

FeatureTracks constant_features(std::size_t n, double f1, double f2) {
  FeatureTracks f;
  f.frame_times.resize(n);
  f.salience.frames.resize(n);
  f.band_energies.bands = {{1000.0, 2000.0}, {2000.0, 6000.0}};
  f.band_energies.energies.assign(n, {0.0, 0.0});
  f.pulsation.onset_strength.assign(n, 0.0);
  f.pulsation.onset_rate_hz.assign(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    f.frame_times[m] = m * 1024.0 / kSr;
    f.salience.frames[m] = {f1, 1.0, f2, 0.8};
  }
  return f;
}

StreamTrace constant_trace(std::size_t n, StreamLabel label, double freq) {
  StreamTrace t;
  t.frames.resize(n);
  t.frame_times.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    t.frame_times[m] = m * 1024.0 / kSr;
    t.frames[m].label = label;
    t.frames[m].selected_freq_hz = freq;
  }
  return t;
}

}  // namespace

TEST_CASE("stimulus validation") {
  StimulusSpec bad;
  bad.burst_stop_s = 3.0;  // past the 2 s duration
  CHECK_THROWS(generate_stimulus(bad));

  StimulusSpec nyq;
  nyq.kind = StimulusKind::sine;
  nyq.freq_hz = 30000.0;
  CHECK_THROWS(generate_stimulus(nyq));
}

TEST_CASE("sine stimulus lands on its frequency") {
  StimulusSpec spec;
  spec.kind = StimulusKind::sine;
  spec.freq_hz = 440.0;
  spec.duration_s = 1.0;
  const AudioBuffer a = generate_stimulus(spec);
  CHECK(a.samples.size() == static_cast<std::size_t>(kSr));
  CHECK(std::abs(peak_freq(a) - 440.0) < spec.sample_rate / 4096.0 + 1.0);
}

TEST_CASE("click train drives the onset extractor at its rate") {
  StimulusSpec spec;
  spec.kind = StimulusKind::click_train;
  spec.click_rate_hz = 5.0;
  spec.duration_s = 2.0;
  const AudioBuffer a = generate_stimulus(spec);
  const auto t = onset_strength(stft(a, StftConfig{}));
  REQUIRE(!t.onset_rate_hz.empty());
  CHECK(std::abs(t.onset_rate_hz[t.onset_rate_hz.size() / 2] - 5.0) <= 0.5);
}

TEST_CASE("crossing glides stimulus is deterministic and burst-limited") {
  const StimulusSpec spec;  // defaults
  const AudioBuffer a = generate_stimulus(spec);
  const AudioBuffer b = generate_stimulus(spec);
  CHECK(a.samples == b.samples);
  CHECK(a.samples.size() == static_cast<std::size_t>(2.0 * kSr));
  for (double s : a.samples) {
    CHECK(std::abs(s) <= 1.0);
    CHECK(std::isfinite(s));
  }

  // Burst region carries noise band energy; outside it the band is tonal only.
  const Spectrogram sp = stft(a, StftConfig{});
  const auto track =
      band_energy(sp, {{1000.0, 2000.0}, {2000.0, 6000.0}});
  double burst_hi = 0.0;
  for (std::size_t m = 0; m < sp.num_frames(); ++m) {
    const double t = sp.frame_times[m];
    if (t > 1.0 && t < 1.15) burst_hi = std::max(burst_hi, track.energies[m][0]);
  }
  CHECK(burst_hi > 0.5);
}

TEST_CASE("salience tracking recovers the crossing glide trajectories") {
  const StimulusSpec spec;  // defaults: 400->1600 and 1600->400 over 2 s
  const AudioBuffer a = generate_stimulus(spec);
  const StftConfig cfg;
  const Spectrogram sp = stft(a, cfg);
  const SalienceConfig sal_cfg;
  std::vector<std::vector<double>> salience(sp.num_frames());
  for (std::size_t m = 0; m < sp.num_frames(); ++m) {
    salience[m] = pitch_salience(spectral_peaks(sp, m), sal_cfg);
  }
  const SalienceTrack track = two_most_salient(salience, sal_cfg);

  auto cents_off = [](double f, double truth) {
    if (f <= 0.0) return 1e9;
    return std::abs(1200.0 * std::log2(f / truth));
  };

  int tonal = 0, correct = 0;
  for (std::size_t m = 0; m < sp.num_frames(); ++m) {
    const double t0 = sp.frame_times[m];
    const double t1 = t0 + cfg.window_size / spec.sample_rate;
    if (t1 > spec.burst_start_s - 0.01 && t0 < spec.burst_stop_s + 0.01) continue;
    if (t1 > spec.duration_s) continue;  // partial window coverage at the end
    ++tonal;
    const double tc = 0.5 * (t0 + t1);
    const double fa = spec.glide_a_start_hz +
                      (spec.glide_a_end_hz - spec.glide_a_start_hz) * tc /
                          spec.duration_s;
    const double fb = spec.glide_b_start_hz +
                      (spec.glide_b_end_hz - spec.glide_b_start_hz) * tc /
                          spec.duration_s;
    const SalienceFrame& f = track.frames[m];
    const bool hit_a = std::min(cents_off(f.freq1_hz, fa),
                                cents_off(f.freq2_hz, fa)) <= 100.0;
    const bool hit_b = std::min(cents_off(f.freq1_hz, fb),
                                cents_off(f.freq2_hz, fb)) <= 100.0;
    correct += hit_a && hit_b;
  }
  REQUIRE(tonal > 40);
  CHECK(static_cast<double>(correct) >= 0.9 * tonal);
}

TEST_CASE("band-limited noise concentrates in its band at unit rms") {
  const auto n = bandlimited_noise(static_cast<std::size_t>(kSr), kSr, 1000.0,
                                   2000.0, 9);
  CHECK(rms(n.samples) == doctest::Approx(1.0).epsilon(0.02));
  const auto track = band_energy(stft(n, StftConfig{}),
                                 {{1000.0, 2000.0}, {3000.0, 6000.0}});
  double in_band = 0.0, out_band = 0.0;
  for (const auto& e : track.energies) {
    in_band += e[0];
    out_band += e[1];
  }
  CHECK(in_band > 10.0 * out_band);

  const auto again = bandlimited_noise(static_cast<std::size_t>(kSr), kSr,
                                       1000.0, 2000.0, 9);
  CHECK(n.samples == again.samples);
}

TEST_CASE("a constant pitch-up trace renders as a single tone") {
  const std::size_t n = 40;
  const StreamTrace trace = constant_trace(n, StreamLabel::pitch_up, 440.0);
  const FeatureTracks f = constant_features(n, 440.0, 220.0);
  const AudioBuffer a = render_stream(trace, f, RenderConfig{});
  REQUIRE(!a.samples.empty());
  CHECK(std::abs(peak_freq(a) - 440.0) < 12.0);
  for (double s : a.samples) CHECK(std::abs(s) <= 1.0);

  // Phase continuity: a sine's sample-to-sample step is bounded by its slope
  // plus the amplitude-ramp step (10 ms ramp).
  const double peak = *std::max_element(a.samples.begin(), a.samples.end());
  const double bound = peak * (2.0 * 3.14159265358979 * 440.0 / kSr +
                               1.0 / (0.010 * kSr)) +
                       1e-9;
  for (std::size_t i = 1; i < a.samples.size(); ++i) {
    CHECK(std::abs(a.samples[i] - a.samples[i - 1]) <= bound);
  }
}

TEST_CASE("empty trace renders as empty audio") {
  const AudioBuffer a =
      render_stream(StreamTrace{}, constant_features(0, 0.0, 0.0), RenderConfig{});
  CHECK(a.samples.empty());
}

TEST_CASE("misaligned trace and features are rejected") {
  CHECK_THROWS(render_stream(constant_trace(10, StreamLabel::pitch_up, 440.0),
                             constant_features(9, 440.0, 220.0), RenderConfig{}));
}

TEST_CASE("label alternation renders without broadband clicks") {
  const std::size_t n = 60;
  StreamTrace trace = constant_trace(n, StreamLabel::pitch_up, 440.0);
  for (std::size_t m = 0; m < n; ++m) {
    if ((m / 10) % 2 == 1) {
      trace.frames[m].label = StreamLabel::noise_lo;
      trace.frames[m].selected_freq_hz = 0.0;
    }
  }
  const FeatureTracks f = constant_features(n, 440.0, 220.0);
  const AudioBuffer a = render_stream(trace, f, RenderConfig{});

  // Tone sits at 440 Hz, noise in 1-2 kHz; clicks would splash well above the
  // band. Measure one octave past the band edge so the 4th-order bandpass
  // skirt (-24 dB/oct) is already below the bound.
  const Spectrogram spec = stft(a, StftConfig{});
  for (std::size_t m = 0; m < spec.num_frames(); ++m) {
    const auto mag = spec.magnitude(m);
    for (std::size_t k = 0; k < mag.size(); ++k) {
      if (spec.bin_freq(static_cast<double>(k)) > 4000.0) {
        CHECK(20.0 * std::log10(mag[k] + 1e-30) < -30.0);
      }
    }
  }
}

TEST_CASE("rendering is deterministic") {
  const std::size_t n = 30;
  StreamTrace trace = constant_trace(n, StreamLabel::noise_hi, 0.0);
  const FeatureTracks f = constant_features(n, 440.0, 220.0);
  const AudioBuffer a = render_stream(trace, f, RenderConfig{});
  const AudioBuffer b = render_stream(trace, f, RenderConfig{});
  CHECK(a.samples == b.samples);
}

TEST_CASE("mixed rendering follows the component amplitudes") {
  const std::size_t n = 40;
  const FeatureTracks f = constant_features(n, 660.0, 330.0);

  MixTrace up;
  up.frames.resize(n);
  up.frame_times.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    up.frame_times[m] = m * 1024.0 / kSr;
    up.frames[m].p_u = 1.0;
    up.frames[m].amp_up = 1.0;
  }
  const AudioBuffer tone = render_mixed(up, f, RenderConfig{});
  CHECK(std::abs(peak_freq(tone) - 660.0) < 12.0);

  MixTrace chaotic = up;
  for (auto& frame : chaotic.frames) {
    frame.p_u = frame.p_d = 0.5;
    frame.amp_up = frame.amp_down = 0.0;
    frame.amp_noise = 0.5;
  }
  RenderConfig raw;
  raw.normalize = false;
  const AudioBuffer noise = render_mixed(chaotic, f, raw);
  const auto track = band_energy(stft(noise, StftConfig{}),
                                 {{1000.0, 6000.0}, {100.0, 900.0}});
  double wide = 0.0, low = 0.0;
  for (const auto& e : track.energies) {
    wide += e[0];
    low += e[1];
  }
  CHECK(wide > 5.0 * low);  // noise-only rendering, no tonal components

  // Scaling all amplitudes scales the un-normalized output rms.
  MixTrace half = up;
  for (auto& frame : half.frames) frame.amp_up = 0.5;
  const AudioBuffer loud = render_mixed(up, f, raw);
  const AudioBuffer soft = render_mixed(half, f, raw);
  CHECK(rms(soft.samples) ==
        doctest::Approx(0.5 * rms(loud.samples)).epsilon(0.01));
}
