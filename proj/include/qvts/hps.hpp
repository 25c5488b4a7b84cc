#ifndef QVTS_HPS_HPP
#define QVTS_HPS_HPP

#include "qvts/features.hpp"
#include "qvts/stft.hpp"

namespace qvts {

struct HpsConfig {
  StftConfig stft;
  int max_peaks = 100;
  double peak_threshold_db = -60.0;
  // A masked peak must also stand this far (dB) above the median magnitude
  // of its spectral neighborhood, so noise maxima, which barely exceed their
  // surroundings, are not treated as sinusoids.
  double prominence_db = 12.0;
  int prominence_halfwidth_bins = 32;  // neighborhood for the local median
  int mask_halfwidth_bins = 3;  // hard part of the mask, soft edges beyond
};

struct HpsResult {
  AudioBuffer harmonic;
  AudioBuffer stochastic;
};

// Mask-based harmonic/residual split. Peaks get a binary mask of
// +-mask_halfwidth_bins with linearly tapered edges; the stochastic part uses
// the complementary mask, so the two resynthesized parts sum back to the
// input wherever the overlap-add has window coverage.
HpsResult harmonic_stochastic_split(const AudioBuffer& audio,
                                    const HpsConfig& cfg = {});

}  // namespace qvts

#endif  // QVTS_HPS_HPP
