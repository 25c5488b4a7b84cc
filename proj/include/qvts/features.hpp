#ifndef QVTS_FEATURES_HPP
#define QVTS_FEATURES_HPP

#include <vector>

#include "qvts/stft.hpp"

namespace qvts {

struct Peak {
  double freq_hz;
  double mag;  // linear, full-scale sine ~= 1
};

// Local maxima above threshold_db (dBFS), parabolically interpolated in
// log magnitude, sorted by magnitude descending.
std::vector<Peak> spectral_peaks(const Spectrogram& spec, std::size_t frame,
                                 int max_peaks = 100,
                                 double threshold_db = -60.0);

struct SalienceConfig {
  double reference_freq = 55.0;   // Hz at bin 0
  double bin_resolution = 10.0;   // cents per bin
  int num_bins = 600;             // 55 Hz .. 1760 Hz
  int num_harmonics = 10;
  double harmonic_weight_base = 0.8;  // w_h = base^(h-1)
  double silence_salience = 0.05;     // normalized sal below this -> freq 0
  // Peaks more than this far below the frame's strongest peak are ignored,
  // so window sidelobes do not pollute the harmonic summation.
  double peak_gate_db = 40.0;

  double bin_to_freq(double b) const {
    return reference_freq * std::pow(2.0, b * bin_resolution / 1200.0);
  }
  double freq_to_bin(double f) const {
    return 1200.0 * std::log2(f / reference_freq) / bin_resolution;
  }
};

// Harmonic-summation salience over cent bins for one frame's peaks.
std::vector<double> pitch_salience(const std::vector<Peak>& peaks,
                                   const SalienceConfig& cfg);

struct SalienceFrame {
  double freq1_hz = 0.0;
  double sal1 = 0.0;
  double freq2_hz = 0.0;
  double sal2 = 0.0;
};

struct SalienceTrack {
  std::vector<SalienceFrame> frames;
};

// Two most salient pitches per frame, separated by at least one semitone,
// saliences normalized to [0,1] over the file.
SalienceTrack two_most_salient(
    const std::vector<std::vector<double>>& salience_per_frame,
    const SalienceConfig& cfg);

struct Band {
  double lo_hz;
  double hi_hz;
};

struct BandEnergyTrack {
  std::vector<Band> bands;
  // energies[frame][band], normalized to [0,1] by the file-wide maximum.
  std::vector<std::vector<double>> energies;
};

BandEnergyTrack band_energy(const Spectrogram& spec,
                            const std::vector<Band>& bands);

struct PulsationTrack {
  std::vector<double> onset_strength;  // half-wave rectified spectral flux
  std::vector<double> onset_times;     // seconds
  std::vector<double> onset_rate_hz;   // onsets per second, 1 s sliding window
};

PulsationTrack onset_strength(const Spectrogram& spec);

// Everything the Hamiltonian schedule consumes, frame-aligned.
struct FeatureTracks {
  std::vector<double> frame_times;
  SalienceTrack salience;
  BandEnergyTrack band_energies;
  PulsationTrack pulsation;

  std::size_t num_frames() const { return frame_times.size(); }
};

FeatureTracks extract_features(const AudioBuffer& audio, const StftConfig& cfg,
                               const SalienceConfig& sal_cfg,
                               const std::vector<Band>& bands);

}  // namespace qvts

#endif  // QVTS_FEATURES_HPP
