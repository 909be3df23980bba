#pragma once

#include <vector>

#include "mentalgen/signal/types.hpp"

namespace mentalgen {

/// Number of full windows of `window` samples advancing by `step` samples
/// over `total` samples; 0 when total < window.
constexpr std::size_t epoch_count(std::size_t total, std::size_t window, std::size_t step) noexcept {
  return total < window || step == 0 ? 0 : (total - window) / step + 1;
}

/// Converts seconds to a whole number of samples; throws when
/// seconds * sample_rate is not integral (within 1e-6).
std::size_t seconds_to_samples(double seconds, double sample_rate);

/// Fixed windows starting every (window_s - overlap_s) seconds; the trailing
/// partial window is dropped. Every epoch carries `label`.
std::vector<Epoch> epoch_windows(const EegRecording& rec, double window_s, double overlap_s,
                                 const SegmentLabel& label = {});

}  // namespace mentalgen
