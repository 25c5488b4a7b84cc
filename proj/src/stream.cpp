#include "qvts/stream.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qvts {

namespace {

// Propagator from the last collapse at m0 to frame m. The integral restarts
// at each collapse: within the locally commutative construction this is
// exp(-i (Theta(m) - Theta(m0)) . sigma). Composing the absolute unitaries
// instead would mix the large accumulated phases of the two frames through
// their slightly different axes and suppress the field's transverse action.
Unitary propagator_since(const HamiltonianTrack& ham, std::size_t m,
                         std::size_t m0) {
  if (m0 == 0) return ham.unitary[m];
  const FieldVector& a = ham.theta[m];
  const FieldVector& b = ham.theta[m0];
  return unitary_from_integrated_field({a.x - b.x, a.y - b.y, a.z - b.z});
}

double selected_pitch(const SalienceFrame& f, bool upper) {
  const double f1 = f.freq1_hz;
  const double f2 = f.freq2_hz;
  if (f1 <= 0.0 && f2 <= 0.0) return 0.0;
  if (f1 <= 0.0) return f2;
  if (f2 <= 0.0) return f1;
  return upper ? std::max(f1, f2) : std::min(f1, f2);
}

}  // namespace

const char* to_string(StreamLabel label) {
  switch (label) {
    case StreamLabel::pitch_up:
      return "pitch_up";
    case StreamLabel::pitch_down:
      return "pitch_down";
    case StreamLabel::noise_lo:
      return "noise_lo";
    case StreamLabel::noise_hi:
    default:
      return "noise_hi";
  }
}

double pitchiness(const PhonState& state) {
  return 2.0 * std::abs(state.down);
}

StreamTrace track_pure(const HamiltonianTrack& ham,
                       const FeatureTracks& features, const PhonState& init,
                       const CollapsePolicy& policy) {
  const std::size_t num_frames = ham.num_frames();
  if (features.num_frames() != num_frames ||
      features.salience.frames.size() != num_frames) {
    throw std::invalid_argument("track_pure: misaligned tracks");
  }
  if (policy.hop_collapse < 1) {
    throw std::invalid_argument("track_pure: hop_collapse must be >= 1");
  }

  SeededRng rng(policy.seed);
  const double h = 1.0 / std::sqrt(2.0);

  StreamTrace trace;
  trace.frames.resize(num_frames);
  trace.frame_times = features.frame_times;

  PhonState base = init;
  std::size_t base_frame = 0;
  for (std::size_t m = 0; m < num_frames; ++m) {
    PhonState state = evolve_pure(base, propagator_since(ham, m, base_frame));
    const double sdiff = pitchiness(state);
    const bool collapse_frame =
        (m > 0) && (m % static_cast<std::size_t>(policy.hop_collapse) == 0);

    StreamFrame& out = trace.frames[m];
    if (sdiff < policy.threshold || sdiff > 2.0 - policy.threshold) {
      // Pitchy: sample up/down from the phonation amplitudes.
      const double p_up = std::norm(state.up);
      const bool up = rng.uniform() < p_up;
      out.label = up ? StreamLabel::pitch_up : StreamLabel::pitch_down;
      out.selected_freq_hz = selected_pitch(features.salience.frames[m], up);
      if (collapse_frame) {
        base = up ? PhonState{1.0, 0.0} : PhonState{0.0, 1.0};
        state = base;
        base_frame = m;
        out.collapse_event = true;
      }
    } else {
      // Turbulent: project onto {|r>, |l>}.
      const PhonState r{h, h};
      const double p_r = std::norm(inner(r, state));
      const bool lo = rng.uniform() < p_r;
      out.label = lo ? StreamLabel::noise_lo : StreamLabel::noise_hi;
      out.selected_freq_hz = 0.0;
      if (collapse_frame) {
        base = lo ? PhonState{h, h} : PhonState{h, -h};
        state = base;
        base_frame = m;
        out.collapse_event = true;
      }
    }
    out.state = state;
  }
  return trace;
}

MixTrace track_mixed(const HamiltonianTrack& ham, const DensityMatrix& init,
                     const CollapsePolicy& policy) {
  if (policy.hop_collapse < 1) {
    throw std::invalid_argument("track_mixed: hop_collapse must be >= 1");
  }
  const std::size_t num_frames = ham.num_frames();

  SeededRng rng(policy.seed);
  const std::vector<Projector> projectors = {
      projector_onto(basis_state(BasisLabel::u)),
      projector_onto(basis_state(BasisLabel::d))};

  MixTrace trace;
  trace.frames.resize(num_frames);

  DensityMatrix base = init;
  std::size_t base_frame = 0;
  for (std::size_t m = 0; m < num_frames; ++m) {
    DensityMatrix rho = evolve_density(base, propagator_since(ham, m, base_frame));
    MixFrame& out = trace.frames[m];

    const bool collapse_frame =
        (m > 0) && (m % static_cast<std::size_t>(policy.hop_collapse) == 0);
    if (collapse_frame) {
      const auto meas = measure_density(rho, projectors, rng);
      base = meas.post;
      rho = meas.post;
      base_frame = m;
      out.collapse_event = true;
    }

    out.rho = rho;
    out.p_u = (rho.r * projectors[0].m).trace().real();
    out.p_d = (rho.r * projectors[1].m).trace().real();
    out.amp_noise = std::min(out.p_u, out.p_d);
    out.amp_up = out.p_u - out.amp_noise;
    out.amp_down = out.p_d - out.amp_noise;
  }
  return trace;
}

}  // namespace qvts
