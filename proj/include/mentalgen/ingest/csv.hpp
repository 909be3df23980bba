#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mentalgen/signal/types.hpp"

namespace mentalgen::ingest {

// EEG CSV, one file per recording:
//
//   # mentalgen-eeg v1
//   sample_rate,256
//   channels,AF3,F7,...
//   <one row per sample: one value per channel, %.9g>
//
// Lines starting with '#' after the first are ignored. A sibling
// "<file>.sha256" holding the hex SHA-256 of the CSV bytes is written on
// save and verified on load when present.

/// Serialized CSV text for `rec`.
std::string format_recording(const EegRecording& rec);
/// Parses CSV text. ParseError carries the 1-based line; NaN/Inf cells raise
/// NonFiniteError.
EegRecording parse_recording(std::string_view text);

void save_recording(const EegRecording& rec, const std::filesystem::path& path);
EegRecording load_recording(const std::filesystem::path& path);

}  // namespace mentalgen::ingest
