#include "qvts/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qvts {

namespace {

// Fixed formatting keeps CSV output bit-reproducible across runs.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const Mat2& m) {
  return nlohmann::json::array({
      {m.a.real(), m.a.imag()},
      {m.b.real(), m.b.imag()},
      {m.c.real(), m.c.imag()},
      {m.d.real(), m.d.imag()},
  });
}

nlohmann::json to_json(const PhonState& s) {
  return nlohmann::json::array({
      {s.up.real(), s.up.imag()},
      {s.down.real(), s.down.imag()},
  });
}

std::string features_csv(const FeatureTracks& features) {
  std::ostringstream out;
  out << "time_s,freq1_hz,sal1,freq2_hz,sal2";
  for (const Band& b : features.band_energies.bands) {
    out << ",band_" << static_cast<int>(b.lo_hz) << "_"
        << static_cast<int>(b.hi_hz);
  }
  out << ",onset_strength,onset_rate_hz\n";
  for (std::size_t m = 0; m < features.num_frames(); ++m) {
    const SalienceFrame& f = features.salience.frames[m];
    out << fmt(features.frame_times[m]) << ',' << fmt(f.freq1_hz) << ','
        << fmt(f.sal1) << ',' << fmt(f.freq2_hz) << ',' << fmt(f.sal2);
    for (double e : features.band_energies.energies[m]) out << ',' << fmt(e);
    out << ',' << fmt(features.pulsation.onset_strength[m]) << ','
        << fmt(features.pulsation.onset_rate_hz[m]) << '\n';
  }
  return out.str();
}

std::string hamiltonian_csv(const HamiltonianTrack& ham,
                            const std::vector<double>& frame_times) {
  std::ostringstream out;
  out << "time_s,nx,ny,nz,theta_x,theta_y,theta_z\n";
  for (std::size_t m = 0; m < ham.num_frames(); ++m) {
    const double t = (m < frame_times.size()) ? frame_times[m] : 0.0;
    out << fmt(t) << ',' << fmt(ham.field[m].x) << ',' << fmt(ham.field[m].y)
        << ',' << fmt(ham.field[m].z) << ',' << fmt(ham.theta[m].x) << ','
        << fmt(ham.theta[m].y) << ',' << fmt(ham.theta[m].z) << '\n';
  }
  return out.str();
}

std::string stream_trace_csv(const StreamTrace& trace) {
  std::ostringstream out;
  out << "time_s,label,selected_freq_hz,a_u_re,a_u_im,a_d_re,a_d_im,"
         "collapse_event\n";
  for (std::size_t m = 0; m < trace.frames.size(); ++m) {
    const StreamFrame& f = trace.frames[m];
    out << fmt(trace.frame_times[m]) << ',' << to_string(f.label) << ','
        << fmt(f.selected_freq_hz) << ',' << fmt(f.state.up.real()) << ','
        << fmt(f.state.up.imag()) << ',' << fmt(f.state.down.real()) << ','
        << fmt(f.state.down.imag()) << ',' << (f.collapse_event ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string mix_trace_csv(const MixTrace& trace,
                          const std::vector<double>& frame_times) {
  std::ostringstream out;
  out << "time_s,p_u,p_d,amp_noise,amp_up,amp_down,collapse_event\n";
  for (std::size_t m = 0; m < trace.frames.size(); ++m) {
    const MixFrame& f = trace.frames[m];
    const double t = (m < frame_times.size()) ? frame_times[m] : 0.0;
    out << fmt(t) << ',' << fmt(f.p_u) << ',' << fmt(f.p_d) << ','
        << fmt(f.amp_noise) << ',' << fmt(f.amp_up) << ',' << fmt(f.amp_down)
        << ',' << (f.collapse_event ? 1 : 0) << '\n';
  }
  return out.str();
}

nlohmann::json stream_trace_json(const StreamTrace& trace) {
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t m = 0; m < trace.frames.size(); ++m) {
    const StreamFrame& f = trace.frames[m];
    frames.push_back({{"time_s", trace.frame_times[m]},
                      {"label", to_string(f.label)},
                      {"selected_freq_hz", f.selected_freq_hz},
                      {"state", to_json(f.state)},
                      {"collapse_event", f.collapse_event}});
  }
  return {{"frames", frames}};
}

nlohmann::json mix_trace_json(const MixTrace& trace,
                              const std::vector<double>& frame_times) {
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t m = 0; m < trace.frames.size(); ++m) {
    const MixFrame& f = trace.frames[m];
    frames.push_back({{"time_s", m < frame_times.size() ? frame_times[m] : 0.0},
                      {"rho", to_json(f.rho.r)},
                      {"p_u", f.p_u},
                      {"p_d", f.p_d},
                      {"amp_noise", f.amp_noise},
                      {"amp_up", f.amp_up},
                      {"amp_down", f.amp_down},
                      {"collapse_event", f.collapse_event}});
  }
  return {{"frames", frames}};
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace qvts
