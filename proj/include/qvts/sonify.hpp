#ifndef QVTS_SONIFY_HPP
#define QVTS_SONIFY_HPP

#include <cstdint>

#include "qvts/audio.hpp"
#include "qvts/features.hpp"
#include "qvts/stream.hpp"

namespace qvts {

enum class StimulusKind { crossing_glides, sine, click_train, noise_band, mixture };

struct StimulusSpec {
  StimulusKind kind = StimulusKind::crossing_glides;
  double duration_s = 2.0;
  double sample_rate = 44100.0;

  // crossing_glides: two linear glides that cross mid-file, interrupted by a
  // band-passed noise burst at equal RMS.
  double glide_a_start_hz = 400.0;
  double glide_a_end_hz = 1600.0;
  double glide_b_start_hz = 1600.0;
  double glide_b_end_hz = 400.0;
  double burst_start_s = 1.0;
  double burst_stop_s = 1.2;
  double burst_lo_hz = 1000.0;
  double burst_hi_hz = 2000.0;

  double freq_hz = 440.0;    // sine / mixture tone
  double click_rate_hz = 5.0;
  double amplitude = 0.45;   // per-component amplitude
  double noise_amplitude = 0.1;  // mixture noise level
  std::uint64_t noise_seed = 0;

  void validate() const;
};

struct RenderConfig {
  double sample_rate = 44100.0;
  double amp_ramp_ms = 10.0;
  std::uint64_t noise_seed = 0;
  bool normalize = true;  // peak-normalize to -1 dBFS
  Band noise_lo_band{1000.0, 2000.0};
  Band noise_hi_band{2000.0, 6000.0};
};

AudioBuffer generate_stimulus(const StimulusSpec& spec);

// Seeded white noise through a 4th-order Butterworth bandpass (cascaded
// 2nd-order high/low sections), scaled to unit RMS.
AudioBuffer bandlimited_noise(std::size_t length, double sample_rate,
                              double lo_hz, double hi_hz, std::uint64_t seed);

AudioBuffer render_stream(const StreamTrace& trace,
                          const FeatureTracks& features,
                          const RenderConfig& cfg);

AudioBuffer render_mixed(const MixTrace& trace, const FeatureTracks& features,
                         const RenderConfig& cfg);

}  // namespace qvts

#endif  // QVTS_SONIFY_HPP
