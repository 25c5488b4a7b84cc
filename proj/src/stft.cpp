#include "qvts/stft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace qvts {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// FFTW planning is not thread-safe; executions on separate buffers are.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(int size) : size_(size) {
    in_ = fftw_alloc_real(size);
    out_ = fftw_alloc_complex(size / 2 + 1);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(size, in_, out_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(size, out_, in_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::vector<std::complex<double>> forward(const std::vector<double>& x) {
    std::memset(in_, 0, sizeof(double) * size_);
    std::memcpy(in_, x.data(), sizeof(double) * std::min<std::size_t>(x.size(), size_));
    fftw_execute(fwd_);
    std::vector<std::complex<double>> result(size_ / 2 + 1);
    std::memcpy(result.data(), out_, sizeof(fftw_complex) * result.size());
    return result;
  }

  // Inverse of a half spectrum; result scaled by 1/size.
  std::vector<double> inverse(const std::vector<std::complex<double>>& spec) {
    std::memcpy(out_, spec.data(),
                sizeof(fftw_complex) * std::min<std::size_t>(spec.size(), size_ / 2 + 1));
    fftw_execute(inv_);
    std::vector<double> result(size_);
    const double scale = 1.0 / size_;
    for (int i = 0; i < size_; ++i) result[i] = in_[i] * scale;
    return result;
  }

 private:
  int size_;
  double* in_;
  fftw_complex* out_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

}  // namespace

void StftConfig::validate() const {
  if (!is_power_of_two(window_size) || !is_power_of_two(fft_size) ||
      !is_power_of_two(hop)) {
    throw std::invalid_argument("StftConfig: sizes must be powers of two");
  }
  if (fft_size < window_size) {
    throw std::invalid_argument("StftConfig: fft_size < window_size");
  }
  if (hop > window_size) {
    throw std::invalid_argument("StftConfig: hop > window_size");
  }
}

std::vector<double> hann_window(int size) {
  std::vector<double> w(size);
  for (int n = 0; n < size; ++n) {
    w[n] = 0.5 * (1.0 - std::cos(2.0 * M_PI * n / size));
  }
  return w;
}

std::vector<double> Spectrogram::magnitude(std::size_t frame) const {
  const auto w = hann_window(config.window_size);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  const double scale = 2.0 / wsum;
  std::vector<double> mag(frames[frame].size());
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag[k] = std::abs(frames[frame][k]) * scale;
  }
  return mag;
}

Spectrogram stft(const AudioBuffer& audio, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t len = audio.samples.size();
  if (len < static_cast<std::size_t>(cfg.window_size)) {
    throw std::invalid_argument("stft: audio shorter than analysis window");
  }

  const std::size_t num_frames = (len - cfg.window_size) / cfg.hop + 1;
  const auto w = hann_window(cfg.window_size);
  RealFft fft(cfg.fft_size);

  Spectrogram spec;
  spec.config = cfg;
  spec.sample_rate = audio.sample_rate;
  spec.frames.reserve(num_frames);
  spec.frame_times.reserve(num_frames);

  std::vector<double> buf(cfg.fft_size, 0.0);
  for (std::size_t m = 0; m < num_frames; ++m) {
    const std::size_t offset = m * cfg.hop;
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int n = 0; n < cfg.window_size; ++n) {
      buf[n] = audio.samples[offset + n] * w[n];
    }
    spec.frames.push_back(fft.forward(buf));
    spec.frame_times.push_back(static_cast<double>(offset) / audio.sample_rate);
  }
  return spec;
}

AudioBuffer istft(const Spectrogram& spec, std::size_t length) {
  const StftConfig& cfg = spec.config;
  const auto w = hann_window(cfg.window_size);
  RealFft fft(cfg.fft_size);

  std::vector<double> out(length, 0.0);
  std::vector<double> wsum(length, 0.0);

  for (std::size_t m = 0; m < spec.frames.size(); ++m) {
    const std::size_t offset = m * cfg.hop;
    const auto grain = fft.inverse(spec.frames[m]);
    for (int n = 0; n < cfg.fft_size; ++n) {
      const std::size_t t = offset + n;
      if (t >= length) break;
      out[t] += grain[n];
    }
    for (int n = 0; n < cfg.window_size; ++n) {
      const std::size_t t = offset + n;
      if (t >= length) break;
      wsum[t] += w[n];
    }
  }

  AudioBuffer result;
  result.sample_rate = spec.sample_rate;
  result.samples.resize(length);
  for (std::size_t t = 0; t < length; ++t) {
    result.samples[t] = (wsum[t] > 1e-8) ? out[t] / wsum[t] : 0.0;
  }
  return result;
}

double spectrogram_distance(const Spectrogram& a, const Spectrogram& b) {
  if (a.num_frames() != b.num_frames() ||
      a.config.fft_size != b.config.fft_size) {
    throw std::invalid_argument("spectrogram_distance: shape mismatch");
  }
  if (a.num_frames() == 0) return 0.0;

  constexpr double kFloorDb = -80.0;
  auto log_mag = [&](const Spectrogram& s, std::size_t m) {
    auto mag = s.magnitude(m);
    for (double& v : mag) {
      const double db = 20.0 * std::log10(v + 1e-30);
      v = std::max(db, kFloorDb) - kFloorDb;  // shifted so the floor reads 0
    }
    return mag;
  };

  double dist_acc = 0.0;
  double energy_acc = 0.0;
  for (std::size_t m = 0; m < a.num_frames(); ++m) {
    const auto la = log_mag(a, m);
    const auto lb = log_mag(b, m);
    double d2 = 0.0, ea = 0.0, eb = 0.0;
    for (std::size_t k = 0; k < la.size(); ++k) {
      const double diff = la[k] - lb[k];
      d2 += diff * diff;
      ea += la[k] * la[k];
      eb += lb[k] * lb[k];
    }
    dist_acc += std::sqrt(d2);
    energy_acc += 0.5 * (std::sqrt(ea) + std::sqrt(eb));
  }
  const double mean_energy = energy_acc / a.num_frames();
  if (mean_energy < 1e-12) return 0.0;
  return (dist_acc / a.num_frames()) / mean_energy;
}

}  // namespace qvts
