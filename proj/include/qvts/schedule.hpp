#ifndef QVTS_SCHEDULE_HPP
#define QVTS_SCHEDULE_HPP

#include <vector>

#include "qvts/features.hpp"
#include "qvts/quantum.hpp"

namespace qvts {

struct ScheduleConfig {
  int decimation = 10;   // frames held per block
  double damping_k = 0.1;
  std::size_t noise_band = 0;   // band-energy column feeding n_x
  bool map_onset_rate_to_ny = false;  // demo mapping; default keeps n_y = 0
};

struct HamiltonianTrack {
  std::vector<FieldVector> field;  // damped, decimated (n_x, n_y, n_z)
  std::vector<FieldVector> theta;  // cumulative integral, frame-period units
  std::vector<Unitary> unitary;    // U(m) = exp(-i theta(m).sigma)

  std::size_t num_frames() const { return field.size(); }
};

// output[m] = input[floor(m/decimation)*decimation]; same length.
std::vector<double> decimate_hold(const std::vector<double>& track,
                                  int decimation);

// envelope[m] = exp(-k*(m mod decimation)) over full blocks; frames beyond
// the last full block are zero.
std::vector<double> damping_envelope(std::size_t num_frames, int decimation,
                                     double k);

HamiltonianTrack build_hamiltonian_track(const FeatureTracks& features,
                                         const ScheduleConfig& cfg);

}  // namespace qvts

#endif  // QVTS_SCHEDULE_HPP
