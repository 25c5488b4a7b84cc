#ifndef QVTS_AUDIO_HPP
#define QVTS_AUDIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qvts {

// Mono audio, full-scale +-1.
struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate = 44100.0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Raised on unreadable or unsupported input files; the CLI maps it to exit 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class WavFormat { pcm16, float32 };

// PCM 16-bit and 32-bit float WAV; stereo is downmixed by channel averaging.
AudioBuffer read_wav(const std::string& path);
void write_wav(const std::string& path, const AudioBuffer& audio,
               WavFormat format = WavFormat::float32);

}  // namespace qvts

#endif  // QVTS_AUDIO_HPP
