#include "qvts/sonify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qvts/rng.hpp"

namespace qvts {

namespace {

// RBJ-cookbook biquad, direct form I.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;

  double process(double x) {
    const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

Biquad butterworth(double freq_hz, double sample_rate, bool highpass) {
  const double q = 1.0 / std::sqrt(2.0);
  const double w0 = 2.0 * M_PI * freq_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;

  Biquad f;
  if (highpass) {
    f.b0 = (1.0 + cw) / 2.0 / a0;
    f.b1 = -(1.0 + cw) / a0;
    f.b2 = (1.0 + cw) / 2.0 / a0;
  } else {
    f.b0 = (1.0 - cw) / 2.0 / a0;
    f.b1 = (1.0 - cw) / a0;
    f.b2 = (1.0 - cw) / 2.0 / a0;
  }
  f.a1 = -2.0 * cw / a0;
  f.a2 = (1.0 - alpha) / a0;
  return f;
}

double rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / x.size());
}

void scale_to_rms(std::vector<double>& x, double target) {
  const double r = rms(x);
  if (r <= 0.0) return;
  const double g = target / r;
  for (double& v : x) v *= g;
}

void peak_normalize(AudioBuffer& audio, double target_dbfs) {
  double peak = 0.0;
  for (double v : audio.samples) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) return;
  const double g = std::pow(10.0, target_dbfs / 20.0) / peak;
  for (double& v : audio.samples) v *= g;
}

// Raised-cosine gate: 1 inside [start, stop], 0 outside, ramp_s fades.
double gate(double t, double start, double stop, double ramp_s) {
  if (t < start - ramp_s || t > stop + ramp_s) return 0.0;
  if (t < start) {
    const double x = (t - (start - ramp_s)) / ramp_s;
    return 0.5 * (1.0 - std::cos(M_PI * x));
  }
  if (t > stop) {
    const double x = ((stop + ramp_s) - t) / ramp_s;
    return 0.5 * (1.0 - std::cos(M_PI * x));
  }
  return 1.0;
}

// Per-sample envelope that slews linearly toward a target.
class Slew {
 public:
  Slew(double initial, double ramp_samples)
      : value_(initial), step_(ramp_samples > 0.0 ? 1.0 / ramp_samples : 2.0) {}
  double next(double target) {
    if (value_ < target) {
      value_ = std::min(target, value_ + step_);
    } else if (value_ > target) {
      value_ = std::max(target, value_ - step_);
    }
    return value_;
  }

 private:
  double value_;
  double step_;
};

}  // namespace

void StimulusSpec::validate() const {
  if (duration_s <= 0.0 || sample_rate <= 0.0) {
    throw std::invalid_argument("StimulusSpec: nonpositive duration or rate");
  }
  const double nyquist = sample_rate / 2.0;
  for (double f : {glide_a_start_hz, glide_a_end_hz, glide_b_start_hz,
                   glide_b_end_hz, freq_hz, burst_hi_hz}) {
    if (f < 0.0 || f >= nyquist) {
      throw std::invalid_argument("StimulusSpec: frequency out of range");
    }
  }
  if (kind == StimulusKind::crossing_glides) {
    if (burst_start_s < 0.0 || burst_stop_s > duration_s ||
        burst_start_s >= burst_stop_s) {
      throw std::invalid_argument("StimulusSpec: burst interval out of range");
    }
    if (burst_lo_hz <= 0.0 || burst_lo_hz >= burst_hi_hz) {
      throw std::invalid_argument("StimulusSpec: bad burst band");
    }
  }
  if (kind == StimulusKind::click_train && click_rate_hz <= 0.0) {
    throw std::invalid_argument("StimulusSpec: click rate must be positive");
  }
}

AudioBuffer bandlimited_noise(std::size_t length, double sample_rate,
                              double lo_hz, double hi_hz, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<double> noise(length);
  for (double& v : noise) v = rng.bipolar();

  Biquad hp1 = butterworth(lo_hz, sample_rate, true);
  Biquad hp2 = butterworth(lo_hz, sample_rate, true);
  Biquad lp1 = butterworth(hi_hz, sample_rate, false);
  Biquad lp2 = butterworth(hi_hz, sample_rate, false);
  for (double& v : noise) {
    v = lp2.process(lp1.process(hp2.process(hp1.process(v))));
  }
  scale_to_rms(noise, 1.0);

  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples = std::move(noise);
  return out;
}

AudioBuffer generate_stimulus(const StimulusSpec& spec) {
  spec.validate();
  const std::size_t n =
      static_cast<std::size_t>(std::lround(spec.duration_s * spec.sample_rate));
  AudioBuffer out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(n, 0.0);
  const double dt = 1.0 / spec.sample_rate;

  switch (spec.kind) {
    case StimulusKind::sine: {
      for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] =
            spec.amplitude * std::sin(2.0 * M_PI * spec.freq_hz * i * dt);
      }
      break;
    }
    case StimulusKind::click_train: {
      const double period = 1.0 / spec.click_rate_hz;
      for (double t = 0.0; t < spec.duration_s; t += period) {
        const std::size_t i = static_cast<std::size_t>(t * spec.sample_rate);
        if (i < n) out.samples[i] = 0.9;
      }
      break;
    }
    case StimulusKind::noise_band: {
      AudioBuffer noise = bandlimited_noise(n, spec.sample_rate, spec.burst_lo_hz,
                                            spec.burst_hi_hz, spec.noise_seed);
      for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] = spec.amplitude * noise.samples[i];
      }
      break;
    }
    case StimulusKind::mixture: {
      SeededRng rng(spec.noise_seed);
      for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] =
            spec.amplitude * std::sin(2.0 * M_PI * spec.freq_hz * i * dt) +
            spec.noise_amplitude * rng.bipolar();
      }
      break;
    }
    case StimulusKind::crossing_glides: {
      const double T = spec.duration_s;
      const double ramp = 0.005;
      AudioBuffer noise = bandlimited_noise(n, spec.sample_rate, spec.burst_lo_hz,
                                            spec.burst_hi_hz, spec.noise_seed);
      // Noise burst at equal RMS to the two sines combined (= amplitude).
      double phase_a = 0.0, phase_b = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = i * dt;
        const double fa = spec.glide_a_start_hz +
                          (spec.glide_a_end_hz - spec.glide_a_start_hz) * t / T;
        const double fb = spec.glide_b_start_hz +
                          (spec.glide_b_end_hz - spec.glide_b_start_hz) * t / T;
        const double burst = gate(t, spec.burst_start_s, spec.burst_stop_s, ramp);
        const double glides = 1.0 - burst;  // interruption, not overlay
        out.samples[i] =
            glides * spec.amplitude * (std::sin(phase_a) + std::sin(phase_b)) +
            burst * spec.amplitude * noise.samples[i];
        phase_a += 2.0 * M_PI * fa * dt;
        phase_b += 2.0 * M_PI * fb * dt;
      }
      break;
    }
  }
  // The burst noise is RMS-matched, so its crest can push past full scale;
  // a uniform gain guard preserves all component ratios.
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 1.0) {
    for (double& v : out.samples) v /= peak;
  }
  return out;
}

namespace {

// Shared tone/noise mixing core for both render paths. Component 0 is a
// phase-continuous sine following freq_hz[frame]; components 1..2 are seeded
// band noises. amps[c][frame] are per-frame target amplitudes.
AudioBuffer mix_components(const std::vector<double>& frame_times,
                           const std::vector<std::vector<double>>& tone_freqs,
                           const std::vector<std::vector<double>>& amps,
                           std::size_t num_tones, const RenderConfig& cfg,
                           const std::vector<Band>& noise_bands,
                           bool interpolate_amps) {
  const std::size_t num_frames = frame_times.size();
  AudioBuffer out;
  out.sample_rate = cfg.sample_rate;
  if (num_frames == 0) return out;

  const double hop_s = (num_frames > 1)
                           ? frame_times[1] - frame_times[0]
                           : 1024.0 / cfg.sample_rate;
  const std::size_t hop = static_cast<std::size_t>(std::lround(hop_s * cfg.sample_rate));
  const std::size_t n = num_frames * hop;
  out.samples.assign(n, 0.0);

  const std::size_t num_noise = noise_bands.size();
  std::vector<AudioBuffer> noises;
  for (std::size_t c = 0; c < num_noise; ++c) {
    noises.push_back(bandlimited_noise(n, cfg.sample_rate, noise_bands[c].lo_hz,
                                       noise_bands[c].hi_hz,
                                       cfg.noise_seed + c + 1));
    // Match tone RMS (a unit-amplitude sine has RMS 1/sqrt(2)).
    for (double& v : noises.back().samples) v *= 1.0 / std::sqrt(2.0);
  }

  const double ramp_samples = cfg.amp_ramp_ms * 1e-3 * cfg.sample_rate;
  const std::size_t num_components = num_tones + num_noise;
  std::vector<Slew> env;
  for (std::size_t c = 0; c < num_components; ++c) {
    env.emplace_back(interpolate_amps ? amps[c][0] : 0.0, ramp_samples);
  }
  std::vector<double> phase(num_tones, 0.0);
  std::vector<double> freq(num_tones, 0.0);
  for (std::size_t v = 0; v < num_tones; ++v) {
    for (std::size_t m = 0; m < num_frames; ++m) {
      if (tone_freqs[v][m] > 0.0) {
        freq[v] = tone_freqs[v][m];
        break;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = std::min(i / hop, num_frames - 1);
    const std::size_t m_next = std::min(m + 1, num_frames - 1);
    const double frac = static_cast<double>(i - m * hop) / hop;

    double sample = 0.0;
    for (std::size_t v = 0; v < num_tones; ++v) {
      double f0 = tone_freqs[v][m];
      double f1 = tone_freqs[v][m_next];
      if (f0 <= 0.0) f0 = freq[v];
      if (f1 <= 0.0) f1 = f0;
      freq[v] = f0 + (f1 - f0) * frac;
      double target = amps[v][m];
      if (interpolate_amps) target += (amps[v][m_next] - amps[v][m]) * frac;
      const double a = interpolate_amps ? target : env[v].next(target);
      sample += a * std::sin(phase[v]);
      phase[v] += 2.0 * M_PI * freq[v] / cfg.sample_rate;
      if (phase[v] > 2.0 * M_PI) phase[v] -= 2.0 * M_PI;
    }
    for (std::size_t c = 0; c < num_noise; ++c) {
      const std::size_t idx = num_tones + c;
      double target = amps[idx][m];
      if (interpolate_amps) target += (amps[idx][m_next] - amps[idx][m]) * frac;
      const double a = interpolate_amps ? target : env[idx].next(target);
      sample += a * noises[c].samples[i];
    }
    out.samples[i] = sample;
  }

  if (cfg.normalize) peak_normalize(out, -1.0);
  return out;
}

}  // namespace

AudioBuffer render_stream(const StreamTrace& trace,
                          const FeatureTracks& features,
                          const RenderConfig& cfg) {
  if (trace.frames.size() != features.num_frames()) {
    throw std::invalid_argument("render_stream: trace/features misaligned");
  }
  const std::size_t num_frames = trace.frames.size();

  std::vector<std::vector<double>> tone_freqs(1,
                                              std::vector<double>(num_frames, 0.0));
  std::vector<std::vector<double>> amps(3, std::vector<double>(num_frames, 0.0));
  for (std::size_t m = 0; m < num_frames; ++m) {
    switch (trace.frames[m].label) {
      case StreamLabel::pitch_up:
      case StreamLabel::pitch_down:
        tone_freqs[0][m] = trace.frames[m].selected_freq_hz;
        amps[0][m] = 1.0;
        break;
      case StreamLabel::noise_lo:
        amps[1][m] = 1.0;
        break;
      case StreamLabel::noise_hi:
        amps[2][m] = 1.0;
        break;
    }
  }
  return mix_components(trace.frame_times, tone_freqs, amps, 1, cfg,
                        {cfg.noise_lo_band, cfg.noise_hi_band},
                        /*interpolate_amps=*/false);
}

AudioBuffer render_mixed(const MixTrace& trace, const FeatureTracks& features,
                         const RenderConfig& cfg) {
  if (trace.frames.size() != features.num_frames()) {
    throw std::invalid_argument("render_mixed: trace/features misaligned");
  }
  const std::size_t num_frames = trace.frames.size();

  std::vector<std::vector<double>> tone_freqs(2,
                                              std::vector<double>(num_frames, 0.0));
  std::vector<std::vector<double>> amps(3, std::vector<double>(num_frames, 0.0));
  for (std::size_t m = 0; m < num_frames; ++m) {
    const SalienceFrame& f = features.salience.frames[m];
    const double f1 = f.freq1_hz, f2 = f.freq2_hz;
    double upper = 0.0, lower = 0.0;
    if (f1 > 0.0 && f2 > 0.0) {
      upper = std::max(f1, f2);
      lower = std::min(f1, f2);
    } else if (f1 > 0.0 || f2 > 0.0) {
      upper = lower = std::max(f1, f2);
    }
    tone_freqs[0][m] = upper;
    tone_freqs[1][m] = lower;
    amps[0][m] = trace.frames[m].amp_up;
    amps[1][m] = trace.frames[m].amp_down;
    amps[2][m] = trace.frames[m].amp_noise;
  }
  // Mixed mode uses one wide noise band spanning both analysis bands.
  return mix_components(features.frame_times, tone_freqs, amps, 2, cfg,
                        {Band{cfg.noise_lo_band.lo_hz, cfg.noise_hi_band.hi_hz}},
                        /*interpolate_amps=*/true);
}

}  // namespace qvts
