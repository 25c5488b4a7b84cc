#ifndef QVTS_STFT_HPP
#define QVTS_STFT_HPP

#include <complex>
#include <vector>

#include "qvts/audio.hpp"

namespace qvts {

struct StftConfig {
  int window_size = 2048;
  int fft_size = 4096;
  int hop = 1024;

  int num_bins() const { return fft_size / 2 + 1; }
  void validate() const;  // powers of two, fft >= window, hop <= window
};

struct Spectrogram {
  std::vector<std::vector<std::complex<double>>> frames;  // bins 0..fft/2
  std::vector<double> frame_times;                        // seconds, frame start
  StftConfig config;
  double sample_rate = 44100.0;

  std::size_t num_frames() const { return frames.size(); }
  double bin_freq(double bin) const {
    return bin * sample_rate / config.fft_size;
  }
  // |X[k]| scaled so a full-scale sine reads ~1.0 (0 dBFS).
  std::vector<double> magnitude(std::size_t frame) const;
};

// Periodic Hann window of the given length.
std::vector<double> hann_window(int size);

Spectrogram stft(const AudioBuffer& audio, const StftConfig& cfg);

// Overlap-add resynthesis with per-sample window-sum normalization.
// Output is cropped/padded to `length` samples.
AudioBuffer istft(const Spectrogram& spec, std::size_t length);

// Mean per-frame L2 distance between dB-floored log-magnitude spectra,
// normalized by the mean log-magnitude energy of the two inputs.
double spectrogram_distance(const Spectrogram& a, const Spectrogram& b);

}  // namespace qvts

#endif  // QVTS_STFT_HPP
