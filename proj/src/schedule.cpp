#include "qvts/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qvts {

std::vector<double> decimate_hold(const std::vector<double>& track,
                                  int decimation) {
  if (decimation < 1) {
    throw std::invalid_argument("decimate_hold: decimation must be >= 1");
  }
  std::vector<double> out(track.size());
  for (std::size_t m = 0; m < track.size(); ++m) {
    out[m] = track[(m / decimation) * decimation];
  }
  return out;
}

std::vector<double> damping_envelope(std::size_t num_frames, int decimation,
                                     double k) {
  if (decimation < 1) {
    throw std::invalid_argument("damping_envelope: decimation must be >= 1");
  }
  std::vector<double> env(num_frames, 0.0);
  const std::size_t full = (num_frames / decimation) * decimation;
  for (std::size_t m = 0; m < full; ++m) {
    env[m] = std::exp(-k * static_cast<double>(m % decimation));
  }
  return env;
}

HamiltonianTrack build_hamiltonian_track(const FeatureTracks& features,
                                         const ScheduleConfig& cfg) {
  const std::size_t num_frames = features.num_frames();
  if (features.salience.frames.size() != num_frames ||
      features.band_energies.energies.size() != num_frames) {
    throw std::invalid_argument(
        "build_hamiltonian_track: feature tracks have mismatched lengths");
  }
  if (cfg.noise_band >= features.band_energies.bands.size()) {
    throw std::invalid_argument("build_hamiltonian_track: bad noise band");
  }

  std::vector<double> nz(num_frames), nx(num_frames), ny(num_frames, 0.0);
  for (std::size_t m = 0; m < num_frames; ++m) {
    nz[m] = features.salience.frames[m].sal1;
    nx[m] = features.band_energies.energies[m][cfg.noise_band];
  }
  if (cfg.map_onset_rate_to_ny &&
      features.pulsation.onset_rate_hz.size() == num_frames) {
    const double max_rate =
        *std::max_element(features.pulsation.onset_rate_hz.begin(),
                          features.pulsation.onset_rate_hz.end());
    if (max_rate > 0.0) {
      for (std::size_t m = 0; m < num_frames; ++m) {
        ny[m] = features.pulsation.onset_rate_hz[m] / max_rate;
      }
    }
  }

  nz = decimate_hold(nz, cfg.decimation);
  nx = decimate_hold(nx, cfg.decimation);
  ny = decimate_hold(ny, cfg.decimation);
  const auto env = damping_envelope(num_frames, cfg.decimation, cfg.damping_k);

  HamiltonianTrack track;
  track.field.resize(num_frames);
  track.theta.resize(num_frames);
  track.unitary.resize(num_frames);

  FieldVector acc;
  for (std::size_t m = 0; m < num_frames; ++m) {
    track.field[m] = {nx[m] * env[m], ny[m] * env[m], nz[m] * env[m]};
    acc.x += track.field[m].x;
    acc.y += track.field[m].y;
    acc.z += track.field[m].z;
    track.theta[m] = acc;
    track.unitary[m] = unitary_from_integrated_field(acc);
  }
  return track;
}

}  // namespace qvts
