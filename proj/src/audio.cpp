#include "qvts/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qvts {

namespace {

// All WAV fields are little-endian; this code assumes a little-endian host.

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open WAV file: " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0) {
    throw InputError("not a RIFF/WAV file: " + path);
  }
  read_u32(in);  // riff size
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0) {
    throw InputError("not a WAVE file: " + path);
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  std::vector<char> data;
  bool have_fmt = false, have_data = false;

  while (in.read(tag, 4)) {
    const std::uint32_t chunk_size = read_u32(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_u16(in);
      channels = read_u16(in);
      sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data.resize(chunk_size);
      in.read(data.data(), chunk_size);
      have_data = true;
    } else {
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }

  if (!have_fmt || !have_data) {
    throw InputError("missing fmt or data chunk: " + path);
  }
  if (channels == 0 || sample_rate == 0) {
    throw InputError("malformed fmt chunk: " + path);
  }

  const bool pcm16 = (format == 1 && bits == 16);
  const bool f32 = (format == 3 && bits == 32);
  if (!pcm16 && !f32) {
    throw InputError("unsupported WAV format (need PCM16 or float32): " + path);
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t num_frames = data.size() / (bytes_per_sample * channels);
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(num_frames);

  for (std::size_t i = 0; i < num_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const char* p = data.data() + (i * channels + c) * bytes_per_sample;
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        acc += static_cast<double>(v);
      }
    }
    out.samples[i] = acc / channels;
  }
  return out;
}

void write_wav(const std::string& path, const AudioBuffer& audio,
               WavFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write WAV file: " + path);

  const std::uint32_t n = static_cast<std::uint32_t>(audio.samples.size());
  const std::uint16_t bits = (format == WavFormat::pcm16) ? 16 : 32;
  const std::uint16_t fmt_code = (format == WavFormat::pcm16) ? 1 : 3;
  const std::uint32_t data_size = n * (bits / 8);
  const std::uint32_t sr = static_cast<std::uint32_t>(audio.sample_rate);

  out.write("RIFF", 4);
  write_u32(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, fmt_code);
  write_u16(out, 1);  // mono
  write_u32(out, sr);
  write_u32(out, sr * (bits / 8));
  write_u16(out, bits / 8);
  write_u16(out, bits);
  out.write("data", 4);
  write_u32(out, data_size);

  if (format == WavFormat::pcm16) {
    for (double s : audio.samples) {
      const double clamped = std::clamp(s, -1.0, 1.0);
      const std::int16_t v =
          static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
      out.write(reinterpret_cast<const char*>(&v), 2);
    }
  } else {
    for (double s : audio.samples) {
      const float v = static_cast<float>(s);
      out.write(reinterpret_cast<const char*>(&v), 4);
    }
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace qvts
