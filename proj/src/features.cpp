#include "qvts/features.hpp"

#include <algorithm>

#include "qvts/hps.hpp"
#include <cmath>
#include <stdexcept>

namespace qvts {

std::vector<Peak> spectral_peaks(const Spectrogram& spec, std::size_t frame,
                                 int max_peaks, double threshold_db) {
  const auto mag = spec.magnitude(frame);
  std::vector<Peak> peaks;
  const double threshold = std::pow(10.0, threshold_db / 20.0);

  for (std::size_t k = 1; k + 1 < mag.size(); ++k) {
    if (mag[k] <= mag[k - 1] || mag[k] < mag[k + 1]) continue;
    if (mag[k] < threshold) continue;
    // Parabolic interpolation in dB around the maximum.
    const double alpha = 20.0 * std::log10(mag[k - 1] + 1e-30);
    const double beta = 20.0 * std::log10(mag[k] + 1e-30);
    const double gamma = 20.0 * std::log10(mag[k + 1] + 1e-30);
    const double denom = alpha - 2.0 * beta + gamma;
    const double p = (std::abs(denom) > 1e-12) ? 0.5 * (alpha - gamma) / denom : 0.0;
    const double interp_db = beta - 0.25 * (alpha - gamma) * p;
    peaks.push_back({spec.bin_freq(static_cast<double>(k) + p),
                     std::pow(10.0, interp_db / 20.0)});
  }

  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.mag > b.mag; });
  if (peaks.size() > static_cast<std::size_t>(max_peaks)) {
    peaks.resize(max_peaks);
  }
  return peaks;
}

std::vector<double> pitch_salience(const std::vector<Peak>& peaks,
                                   const SalienceConfig& cfg) {
  std::vector<double> salience(cfg.num_bins, 0.0);
  const double half_semitone = 50.0;  // cents

  double max_mag = 0.0;
  for (const Peak& peak : peaks) max_mag = std::max(max_mag, peak.mag);
  const double gate = max_mag * std::pow(10.0, -cfg.peak_gate_db / 20.0);

  for (const Peak& peak : peaks) {
    if (peak.freq_hz <= 0.0 || peak.mag < gate) continue;
    for (int h = 1; h <= cfg.num_harmonics; ++h) {
      const double w_h = std::pow(cfg.harmonic_weight_base, h - 1);
      const double f0 = peak.freq_hz / h;
      if (f0 < cfg.reference_freq * 0.5) break;
      const double center = cfg.freq_to_bin(f0);
      const int b_lo = std::max(0, static_cast<int>(std::floor(
                                       center - half_semitone / cfg.bin_resolution)));
      const int b_hi = std::min(cfg.num_bins - 1,
                                static_cast<int>(std::ceil(
                                    center + half_semitone / cfg.bin_resolution)));
      for (int b = b_lo; b <= b_hi; ++b) {
        const double d_cents = std::abs(b - center) * cfg.bin_resolution;
        if (d_cents > half_semitone) continue;
        const double weight = std::cos(d_cents / half_semitone * M_PI / 2.0);
        salience[b] += w_h * peak.mag * weight * weight;
      }
    }
  }
  return salience;
}

SalienceTrack two_most_salient(
    const std::vector<std::vector<double>>& salience_per_frame,
    const SalienceConfig& cfg) {
  const int semitone_bins =
      static_cast<int>(std::lround(100.0 / cfg.bin_resolution));

  struct RawPick {
    int bin1 = -1, bin2 = -1;
    double sal1 = 0.0, sal2 = 0.0;
  };
  std::vector<RawPick> picks(salience_per_frame.size());

  for (std::size_t m = 0; m < salience_per_frame.size(); ++m) {
    const auto& sal = salience_per_frame[m];
    // Local maxima; ties break toward lower frequency via strict right test.
    std::vector<int> maxima;
    for (int b = 0; b < static_cast<int>(sal.size()); ++b) {
      const double left = (b > 0) ? sal[b - 1] : 0.0;
      const double right = (b + 1 < static_cast<int>(sal.size())) ? sal[b + 1] : 0.0;
      if (sal[b] > 0.0 && sal[b] >= left && sal[b] > right) maxima.push_back(b);
    }
    std::stable_sort(maxima.begin(), maxima.end(), [&](int a, int b) {
      if (sal[a] != sal[b]) return sal[a] > sal[b];
      return a < b;
    });

    // Subharmonic suppression: a maximum whose salience is mostly borrowed
    // from another source shows a comparably strong maximum at an integer
    // multiple of its frequency; drop it in favor of the true pitches.
    auto is_subharmonic = [&](int b) {
      for (int k = 2; k <= 10; ++k) {
        const double shift = 1200.0 * std::log2(static_cast<double>(k)) /
                             cfg.bin_resolution;
        const int target = b + static_cast<int>(std::lround(shift));
        const int halfwidth = semitone_bins / 2;
        for (int cand : maxima) {
          if (std::abs(cand - target) <= halfwidth &&
              sal[cand] >= 0.8 * sal[b]) {
            return true;
          }
        }
      }
      return false;
    };

    std::vector<int> kept;
    for (int b : maxima) {
      if (!is_subharmonic(b)) kept.push_back(b);
    }
    if (kept.empty()) kept = maxima;

    if (!kept.empty()) {
      picks[m].bin1 = kept[0];
      picks[m].sal1 = sal[kept[0]];
      for (std::size_t i = 1; i < kept.size(); ++i) {
        if (std::abs(kept[i] - picks[m].bin1) >= semitone_bins) {
          picks[m].bin2 = kept[i];
          picks[m].sal2 = sal[kept[i]];
          break;
        }
      }
    }
  }

  double max_sal = 0.0;
  for (const auto& p : picks) max_sal = std::max(max_sal, p.sal1);

  SalienceTrack track;
  track.frames.resize(picks.size());
  for (std::size_t m = 0; m < picks.size(); ++m) {
    SalienceFrame& f = track.frames[m];
    if (max_sal > 0.0) {
      f.sal1 = picks[m].sal1 / max_sal;
      f.sal2 = picks[m].sal2 / max_sal;
    }
    f.freq1_hz = (picks[m].bin1 >= 0 && f.sal1 >= cfg.silence_salience)
                     ? cfg.bin_to_freq(picks[m].bin1)
                     : 0.0;
    f.freq2_hz = (picks[m].bin2 >= 0 && f.sal2 >= cfg.silence_salience)
                     ? cfg.bin_to_freq(picks[m].bin2)
                     : 0.0;
  }
  return track;
}

BandEnergyTrack band_energy(const Spectrogram& spec,
                            const std::vector<Band>& bands) {
  const double nyquist = spec.sample_rate / 2.0;
  for (const Band& band : bands) {
    if (band.lo_hz < 0.0 || band.lo_hz >= band.hi_hz || band.hi_hz > nyquist) {
      throw std::invalid_argument("band_energy: invalid band");
    }
  }

  BandEnergyTrack track;
  track.bands = bands;
  track.energies.resize(spec.num_frames());

  double max_energy = 0.0;
  for (std::size_t m = 0; m < spec.num_frames(); ++m) {
    track.energies[m].resize(bands.size(), 0.0);
    for (std::size_t i = 0; i < bands.size(); ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.frames[m].size(); ++k) {
        const double f = spec.bin_freq(static_cast<double>(k));
        if (f >= bands[i].lo_hz && f < bands[i].hi_hz) {
          acc += std::norm(spec.frames[m][k]);
        }
      }
      track.energies[m][i] = acc;
      max_energy = std::max(max_energy, acc);
    }
  }
  if (max_energy > 0.0) {
    for (auto& frame : track.energies) {
      for (double& e : frame) e /= max_energy;
    }
  }
  return track;
}

PulsationTrack onset_strength(const Spectrogram& spec) {
  PulsationTrack track;
  const std::size_t num_frames = spec.num_frames();
  track.onset_strength.resize(num_frames, 0.0);

  std::vector<double> prev;
  for (std::size_t m = 0; m < num_frames; ++m) {
    const auto mag = spec.magnitude(m);
    double flux = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
      const double p = (m > 0) ? prev[k] : 0.0;
      flux += std::max(0.0, mag[k] - p);
    }
    track.onset_strength[m] = flux;
    prev = mag;
  }
  if (num_frames == 0) return track;

  std::vector<double> sorted = track.onset_strength;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double peak = *std::max_element(track.onset_strength.begin(),
                                        track.onset_strength.end());
  const double threshold = median + 0.1 * (peak - median);

  for (std::size_t m = 0; m < num_frames; ++m) {
    const double v = track.onset_strength[m];
    const double left = (m > 0) ? track.onset_strength[m - 1] : 0.0;
    const double right =
        (m + 1 < num_frames) ? track.onset_strength[m + 1] : 0.0;
    if (v > threshold && v > 0.0 && v >= left && v > right) {
      track.onset_times.push_back(spec.frame_times[m]);
    }
  }

  track.onset_rate_hz.resize(num_frames, 0.0);
  for (std::size_t m = 0; m < num_frames; ++m) {
    const double t = spec.frame_times[m];
    int count = 0;
    for (double ot : track.onset_times) {
      if (ot >= t - 0.5 && ot < t + 0.5) ++count;
    }
    track.onset_rate_hz[m] = count;
  }
  return track;
}

FeatureTracks extract_features(const AudioBuffer& audio, const StftConfig& cfg,
                               const SalienceConfig& sal_cfg,
                               const std::vector<Band>& bands) {
  const Spectrogram spec = stft(audio, cfg);

  std::vector<std::vector<double>> salience(spec.num_frames());
  for (std::size_t m = 0; m < spec.num_frames(); ++m) {
    salience[m] = pitch_salience(spectral_peaks(spec, m), sal_cfg);
  }

  // Band energies measure the turbulence potential, so they are taken from
  // the stochastic component; tonal glides sweeping through a band would
  // otherwise swamp it.
  HpsConfig hps_cfg;
  hps_cfg.stft = cfg;
  const AudioBuffer stochastic = harmonic_stochastic_split(audio, hps_cfg).stochastic;

  FeatureTracks features;
  features.frame_times = spec.frame_times;
  features.salience = two_most_salient(salience, sal_cfg);
  features.band_energies = band_energy(stft(stochastic, cfg), bands);
  features.pulsation = onset_strength(spec);
  return features;
}

}  // namespace qvts
