// qvts: analyze vocal-feature tracks, evolve phon states under a
// feature-driven Hamiltonian, and sonify the resulting streams.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qvts/audio.hpp"
#include "qvts/hps.hpp"
#include "qvts/sonify.hpp"
#include "qvts/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  int window = 2048;
  int fft = 4096;
  int hop = 1024;
  std::string bands = "1000:2000,2000:6000";
  std::string out_dir = ".";
};

std::vector<qvts::Band> parse_bands(const std::string& text) {
  std::vector<qvts::Band> bands;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw qvts::InputError("bad band spec (expected lo:hi): " + item);
    }
    bands.push_back({std::stod(item.substr(0, colon)),
                     std::stod(item.substr(colon + 1))});
  }
  if (bands.empty()) throw qvts::InputError("no bands given");
  return bands;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QVTS_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

qvts::StftConfig stft_config(const CommonOpts& opts) {
  qvts::StftConfig cfg;
  cfg.window_size = opts.window;
  cfg.fft_size = opts.fft;
  cfg.hop = opts.hop;
  cfg.validate();
  return cfg;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& params, const std::vector<std::string>& outputs) {
  json manifest = {{"tool", "qvts"},
                   {"version", kVersion},
                   {"command", command},
                   {"parameters", params},
                   {"outputs", outputs}};
  qvts::write_file_atomic((dir / "manifest.json").string(),
                          manifest.dump(2) + "\n");
}

void write_wav_atomic(const fs::path& path, const qvts::AudioBuffer& audio,
                      qvts::WavFormat format = qvts::WavFormat::float32) {
  const std::string tmp = path.string() + ".tmp";
  qvts::write_wav(tmp, audio, format);
  fs::rename(tmp, path);
}

json stft_params(const CommonOpts& opts) {
  return {{"window", opts.window},
          {"fft", opts.fft},
          {"hop", opts.hop},
          {"bands", opts.bands}};
}

// --- analyze ----------------------------------------------------------------

int cmd_analyze(const std::string& input, const CommonOpts& opts) {
  const auto audio = qvts::read_wav(input);
  const auto cfg = stft_config(opts);
  const auto bands = parse_bands(opts.bands);
  const auto features =
      qvts::extract_features(audio, cfg, qvts::SalienceConfig{}, bands);

  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  qvts::write_file_atomic((dir / "features.csv").string(),
                          qvts::features_csv(features));
  write_manifest(dir, "analyze",
                 {{"input", input}, {"stft", stft_params(opts)}},
                 {"features.csv"});
  return 0;
}

// --- track ------------------------------------------------------------------

struct TrackOpts {
  std::string mode = "pure";
  std::string init = "u";
  std::string init_mix;
  int decimation = 10;
  double damping_k = 0.1;
  double threshold = 0.7;
  int hop_collapse = 5;
  std::uint64_t seed = default_seed();
  bool sonify = false;
};

qvts::BasisLabel parse_init(const std::string& text) {
  if (text == "u") return qvts::BasisLabel::u;
  if (text == "d") return qvts::BasisLabel::d;
  if (text == "r") return qvts::BasisLabel::r;
  if (text == "l") return qvts::BasisLabel::l;
  if (text == "f") return qvts::BasisLabel::f;
  if (text == "s") return qvts::BasisLabel::s;
  throw qvts::InputError("bad --init (expected one of u,d,r,l,f,s): " + text);
}

int cmd_track(const std::string& input, const CommonOpts& opts,
              const TrackOpts& track) {
  const auto audio = qvts::read_wav(input);
  const auto cfg = stft_config(opts);
  const auto bands = parse_bands(opts.bands);
  const auto features =
      qvts::extract_features(audio, cfg, qvts::SalienceConfig{}, bands);

  qvts::ScheduleConfig sched;
  sched.decimation = track.decimation;
  sched.damping_k = track.damping_k;
  const auto ham = qvts::build_hamiltonian_track(features, sched);

  qvts::CollapsePolicy policy;
  policy.threshold = track.threshold;
  policy.hop_collapse = track.hop_collapse;
  policy.seed = track.seed;

  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  std::vector<std::string> outputs = {"hamiltonian.csv", "trace.csv",
                                      "trace.json"};
  qvts::write_file_atomic((dir / "hamiltonian.csv").string(),
                          qvts::hamiltonian_csv(ham, features.frame_times));

  qvts::RenderConfig render;
  render.sample_rate = audio.sample_rate;
  render.noise_seed = track.seed;
  render.noise_lo_band = bands.size() > 0 ? bands[0] : qvts::Band{1000, 2000};
  render.noise_hi_band = bands.size() > 1 ? bands[1] : qvts::Band{2000, 6000};

  if (track.mode == "pure") {
    if (!track.init_mix.empty()) {
      throw qvts::InputError("--init-mix requires --mode mixed");
    }
    const auto trace = qvts::track_pure(ham, features,
                                        qvts::basis_state(parse_init(track.init)),
                                        policy);
    qvts::write_file_atomic((dir / "trace.csv").string(),
                            qvts::stream_trace_csv(trace));
    qvts::write_file_atomic((dir / "trace.json").string(),
                            qvts::stream_trace_json(trace).dump(2) + "\n");
    if (track.sonify) {
      write_wav_atomic(dir / "sonification.wav",
                       qvts::render_stream(trace, features, render));
      outputs.push_back("sonification.wav");
    }
  } else if (track.mode == "mixed") {
    qvts::DensityMatrix init;
    if (!track.init_mix.empty()) {
      const auto comma = track.init_mix.find(',');
      if (comma == std::string::npos) {
        throw qvts::InputError("bad --init-mix (expected p,q)");
      }
      const double p = std::stod(track.init_mix.substr(0, comma));
      const double q = std::stod(track.init_mix.substr(comma + 1));
      init = qvts::density_from_ensemble(
          {{p, qvts::basis_state(qvts::BasisLabel::u)},
           {q, qvts::basis_state(qvts::BasisLabel::d)}});
    } else {
      init = qvts::density_from_pure(
          qvts::basis_state(parse_init(track.init)));
    }
    auto trace = qvts::track_mixed(ham, init, policy);
    trace.frame_times = features.frame_times;
    qvts::write_file_atomic((dir / "trace.csv").string(),
                            qvts::mix_trace_csv(trace, features.frame_times));
    qvts::write_file_atomic(
        (dir / "trace.json").string(),
        qvts::mix_trace_json(trace, features.frame_times).dump(2) + "\n");
    if (track.sonify) {
      write_wav_atomic(dir / "sonification.wav",
                       qvts::render_mixed(trace, features, render));
      outputs.push_back("sonification.wav");
    }
  } else {
    throw qvts::InputError("bad --mode (expected pure or mixed): " + track.mode);
  }

  write_manifest(dir, "track",
                 {{"input", input},
                  {"stft", stft_params(opts)},
                  {"mode", track.mode},
                  {"init", track.init},
                  {"init_mix", track.init_mix},
                  {"decimation", track.decimation},
                  {"damping_k", track.damping_k},
                  {"threshold", track.threshold},
                  {"hop_collapse", track.hop_collapse},
                  {"seed", track.seed},
                  {"sonify", track.sonify}},
                 outputs);
  return 0;
}

// --- demo-commutator ----------------------------------------------------------

int cmd_demo_commutator(const std::string& input, const CommonOpts& opts) {
  const auto audio = qvts::read_wav(input);
  qvts::HpsConfig hps;
  hps.stft = stft_config(opts);

  auto phonation = [&](const qvts::AudioBuffer& x) {
    return qvts::harmonic_stochastic_split(x, hps).harmonic;
  };
  auto turbulence = [&](const qvts::AudioBuffer& x) {
    return qvts::harmonic_stochastic_split(x, hps).stochastic;
  };

  const auto t_a = turbulence(audio);    // T(A)
  const auto p_a = phonation(audio);     // P(A)
  const auto pt_a = phonation(t_a);      // PT(A)
  const auto tp_a = turbulence(p_a);     // TP(A)
  const auto st2 = turbulence(t_a);      // St^2(A)

  const auto& cfg = hps.stft;
  const double commutator_distance =
      qvts::spectrogram_distance(qvts::stft(pt_a, cfg), qvts::stft(tp_a, cfg));
  const double idempotence_distance =
      qvts::spectrogram_distance(qvts::stft(t_a, cfg), qvts::stft(st2, cfg));
  const double first_measure_distance =
      qvts::spectrogram_distance(qvts::stft(audio, cfg), qvts::stft(t_a, cfg));

  const bool noncommutative = commutator_distance > 0.05;
  const bool idempotent =
      idempotence_distance < 0.25 * first_measure_distance;

  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  write_wav_atomic(dir / "T_A.wav", t_a);
  write_wav_atomic(dir / "P_A.wav", p_a);
  write_wav_atomic(dir / "PT_A.wav", pt_a);
  write_wav_atomic(dir / "TP_A.wav", tp_a);

  json report = {{"commutator_distance", commutator_distance},
                 {"commutator_nonzero", noncommutative},
                 {"idempotence_distance", idempotence_distance},
                 {"first_measure_distance", first_measure_distance},
                 {"idempotence_pass", idempotent}};
  qvts::write_file_atomic((dir / "report.json").string(),
                          report.dump(2) + "\n");
  write_manifest(dir, "demo-commutator",
                 {{"input", input}, {"stft", stft_params(opts)}},
                 {"report.json", "T_A.wav", "P_A.wav", "PT_A.wav", "TP_A.wav"});
  std::cout << report.dump(2) << std::endl;
  return 0;
}

// --- gen ----------------------------------------------------------------------

struct GenOpts {
  std::string kind = "crossing_glides";
  double duration = 2.0;
  double sample_rate = 44100.0;
  double freq = 440.0;
  double rate = 5.0;
  double amplitude = 0.45;
  double burst_start = 1.0;
  double burst_stop = 1.2;
  std::string burst_band = "1000:2000";
  std::uint64_t seed = default_seed();
  std::string out = "stimulus.wav";
};

int cmd_gen(const GenOpts& gen, const CommonOpts& opts) {
  qvts::StimulusSpec spec;
  if (gen.kind == "crossing_glides") {
    spec.kind = qvts::StimulusKind::crossing_glides;
  } else if (gen.kind == "sine") {
    spec.kind = qvts::StimulusKind::sine;
  } else if (gen.kind == "click_train") {
    spec.kind = qvts::StimulusKind::click_train;
  } else if (gen.kind == "noise_band") {
    spec.kind = qvts::StimulusKind::noise_band;
  } else if (gen.kind == "mixture") {
    spec.kind = qvts::StimulusKind::mixture;
  } else {
    throw qvts::InputError("bad --kind: " + gen.kind);
  }
  spec.duration_s = gen.duration;
  spec.sample_rate = gen.sample_rate;
  spec.freq_hz = gen.freq;
  spec.click_rate_hz = gen.rate;
  spec.amplitude = gen.amplitude;
  spec.burst_start_s = gen.burst_start;
  spec.burst_stop_s = gen.burst_stop;
  const auto band = parse_bands(gen.burst_band);
  spec.burst_lo_hz = band[0].lo_hz;
  spec.burst_hi_hz = band[0].hi_hz;
  spec.noise_seed = gen.seed;

  const auto audio = qvts::generate_stimulus(spec);
  fs::create_directories(opts.out_dir);
  const fs::path out_path = fs::path(opts.out_dir) / gen.out;
  write_wav_atomic(out_path, audio);
  write_manifest(out_path.parent_path(), "gen",
                 {{"kind", gen.kind},
                  {"duration", gen.duration},
                  {"sample_rate", gen.sample_rate},
                  {"freq", gen.freq},
                  {"rate", gen.rate},
                  {"amplitude", gen.amplitude},
                  {"burst_start", gen.burst_start},
                  {"burst_stop", gen.burst_stop},
                  {"burst_band", gen.burst_band},
                  {"seed", gen.seed}},
                 {gen.out});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-inspired vocal stream analysis and sonification"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string input;
  TrackOpts track;
  GenOpts gen;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--window", common.window, "STFT window size (samples)");
    sub->add_option("--fft", common.fft, "FFT size (samples)");
    sub->add_option("--hop", common.hop, "hop size (samples)");
    sub->add_option("--bands", common.bands, "noise bands lo:hi,lo:hi (Hz)");
    sub->add_option("--out-dir", common.out_dir, "output directory");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "extract feature tracks");
  analyze->add_option("input", input, "input WAV file")->required();
  add_common(analyze);

  CLI::App* trk = app.add_subcommand("track", "run stream tracking");
  trk->add_option("input", input, "input WAV file")->required();
  add_common(trk);
  trk->add_option("--mode", track.mode, "pure or mixed");
  trk->add_option("--init", track.init, "initial basis state (u,d,r,l,f,s)");
  trk->add_option("--init-mix", track.init_mix,
                  "initial mixed state p,q over {|u>,|d>}");
  trk->add_option("--decimation", track.decimation, "field hold length");
  trk->add_option("--damping-k", track.damping_k, "damping rate");
  trk->add_option("--threshold", track.threshold, "pitchiness threshold");
  trk->add_option("--hop-collapse", track.hop_collapse, "frames per collapse");
  trk->add_option("--seed", track.seed, "RNG seed");
  trk->add_flag("--sonify", track.sonify, "render sonification WAV");

  CLI::App* demo = app.add_subcommand("demo-commutator",
                                      "non-commutativity and autostate demo");
  demo->add_option("input", input, "input WAV file")->required();
  add_common(demo);

  CLI::App* generate = app.add_subcommand("gen", "generate a test stimulus");
  add_common(generate);
  generate->add_option("--kind", gen.kind,
                       "crossing_glides, sine, click_train, noise_band, mixture");
  generate->add_option("--duration", gen.duration, "seconds");
  generate->add_option("--sample-rate", gen.sample_rate, "Hz");
  generate->add_option("--freq", gen.freq, "tone frequency (Hz)");
  generate->add_option("--rate", gen.rate, "click rate (Hz)");
  generate->add_option("--amplitude", gen.amplitude, "per-component amplitude");
  generate->add_option("--burst-start", gen.burst_start, "seconds");
  generate->add_option("--burst-stop", gen.burst_stop, "seconds");
  generate->add_option("--burst-band", gen.burst_band, "lo:hi (Hz)");
  generate->add_option("--seed", gen.seed, "noise seed");
  generate->add_option("--out", gen.out, "output WAV filename");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(input, common);
    if (trk->parsed()) return cmd_track(input, common, track);
    if (demo->parsed()) return cmd_demo_commutator(input, common);
    if (generate->parsed()) return cmd_gen(gen, common);
  } catch (const qvts::InputError& e) {
    std::cerr << "qvts: " << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qvts: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qvts: internal error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
