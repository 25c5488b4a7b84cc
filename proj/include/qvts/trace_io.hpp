#ifndef QVTS_TRACE_IO_HPP
#define QVTS_TRACE_IO_HPP

#include <string>

#include "json.hpp"
#include "qvts/features.hpp"
#include "qvts/schedule.hpp"
#include "qvts/stream.hpp"

namespace qvts {

// Matrices serialize as row-major [re, im] pairs.
nlohmann::json to_json(const Mat2& m);
nlohmann::json to_json(const PhonState& s);

std::string features_csv(const FeatureTracks& features);
std::string hamiltonian_csv(const HamiltonianTrack& ham,
                            const std::vector<double>& frame_times);
std::string stream_trace_csv(const StreamTrace& trace);
std::string mix_trace_csv(const MixTrace& trace,
                          const std::vector<double>& frame_times);

nlohmann::json stream_trace_json(const StreamTrace& trace);
nlohmann::json mix_trace_json(const MixTrace& trace,
                              const std::vector<double>& frame_times);

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace qvts

#endif  // QVTS_TRACE_IO_HPP
