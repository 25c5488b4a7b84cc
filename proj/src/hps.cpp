#include "qvts/hps.hpp"

#include <algorithm>
#include <cmath>

namespace qvts {

HpsResult harmonic_stochastic_split(const AudioBuffer& audio,
                                    const HpsConfig& cfg) {
  Spectrogram spec = stft(audio, cfg.stft);
  Spectrogram harmonic = spec;
  Spectrogram stochastic = spec;

  const int num_bins = cfg.stft.num_bins();
  const int soft = 2;  // taper length beyond the hard mask

  for (std::size_t m = 0; m < spec.num_frames(); ++m) {
    const auto mag = spec.magnitude(m);
    const double prominence_gain = std::pow(10.0, cfg.prominence_db / 20.0);

    auto local_median = [&](int k0) {
      const int lo = std::max(0, k0 - cfg.prominence_halfwidth_bins);
      const int hi = std::min(num_bins - 1, k0 + cfg.prominence_halfwidth_bins);
      std::vector<double> window(mag.begin() + lo, mag.begin() + hi + 1);
      std::nth_element(window.begin(), window.begin() + window.size() / 2,
                       window.end());
      return window[window.size() / 2];
    };

    const auto peaks =
        spectral_peaks(spec, m, cfg.max_peaks, cfg.peak_threshold_db);

    std::vector<double> mask(num_bins, 0.0);
    for (const Peak& peak : peaks) {
      const int k0 = static_cast<int>(
          std::lround(peak.freq_hz * cfg.stft.fft_size / spec.sample_rate));
      if (k0 < 0 || k0 >= num_bins) continue;
      if (mag[k0] < local_median(k0) * prominence_gain) continue;
      for (int dk = -(cfg.mask_halfwidth_bins + soft);
           dk <= cfg.mask_halfwidth_bins + soft; ++dk) {
        const int k = k0 + dk;
        if (k < 0 || k >= num_bins) continue;
        const int excess = std::abs(dk) - cfg.mask_halfwidth_bins;
        const double v =
            (excess <= 0) ? 1.0 : 1.0 - static_cast<double>(excess) / (soft + 1);
        mask[k] = std::max(mask[k], v);
      }
    }

    for (int k = 0; k < num_bins; ++k) {
      harmonic.frames[m][k] = spec.frames[m][k] * mask[k];
      stochastic.frames[m][k] = spec.frames[m][k] * (1.0 - mask[k]);
    }
  }

  HpsResult result;
  result.harmonic = istft(harmonic, audio.samples.size());
  result.stochastic = istft(stochastic, audio.samples.size());
  return result;
}

}  // namespace qvts
