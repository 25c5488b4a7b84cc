#ifndef QVTS_RNG_HPP
#define QVTS_RNG_HPP

#include <cstdint>
#include <random>

namespace qvts {

// Seedable deterministic generator. All sampling APIs take one of these
// explicitly; the raw engine is mt19937_64 and the uniform draw avoids
// std::uniform_real_distribution so results are identical across platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1); used as white noise source.
  double bipolar() { return 2.0 * uniform() - 1.0; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qvts

#endif  // QVTS_RNG_HPP
