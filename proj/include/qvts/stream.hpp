#ifndef QVTS_STREAM_HPP
#define QVTS_STREAM_HPP

#include <cstdint>
#include <vector>

#include "qvts/quantum.hpp"
#include "qvts/schedule.hpp"

namespace qvts {

struct CollapsePolicy {
  double threshold = 0.7;   // pitchiness
  int hop_collapse = 5;     // frames between state resets
  std::uint64_t seed = 0;
};

enum class StreamLabel { pitch_up, pitch_down, noise_lo, noise_hi };

const char* to_string(StreamLabel label);

struct StreamFrame {
  PhonState state;
  StreamLabel label = StreamLabel::pitch_up;
  double selected_freq_hz = 0.0;  // 0 for noise labels
  bool collapse_event = false;
};

struct StreamTrace {
  std::vector<StreamFrame> frames;
  std::vector<double> frame_times;
};

struct MixFrame {
  DensityMatrix rho;
  double p_u = 0.0;
  double p_d = 0.0;
  double amp_noise = 0.0;
  double amp_up = 0.0;
  double amp_down = 0.0;
  bool collapse_event = false;
};

struct MixTrace {
  std::vector<MixFrame> frames;
  std::vector<double> frame_times;
};

// ||state - sigma_z state||_2 = 2|a_d|; 0 for |u>, 2 for |d>, sqrt(2) for |r>.
double pitchiness(const PhonState& state);

// Pure-state tracking loop: every frame is labeled by a Born-rule sample
// (pitchy frames between |u>/|d>, turbulent frames between |r>/|l>); the
// evolving state is reset to the sampled basis state only on frames with
// m % hop_collapse == 0 (m > 0).
StreamTrace track_pure(const HamiltonianTrack& ham,
                       const FeatureTracks& features, const PhonState& init,
                       const CollapsePolicy& policy);

// Mixed-state tracking: rho(m) = U(m) rho_last U(m)^dagger, mix weights per
// the min rule, periodic projective collapse onto {|u>,|d>}.
MixTrace track_mixed(const HamiltonianTrack& ham, const DensityMatrix& init,
                     const CollapsePolicy& policy);

}  // namespace qvts

#endif  // QVTS_STREAM_HPP
