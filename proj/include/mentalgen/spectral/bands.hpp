#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "mentalgen/spectral/welch.hpp"

namespace mentalgen::spectral {

enum class Band : std::uint8_t { delta = 0, theta, alpha, beta, gamma };
inline constexpr std::size_t kBandCount = 5;

struct BandEdges {
  Band band;
  std::string_view name;
  double low;   // inclusive
  double high;  // exclusive, except gamma which is closed at the filter cap
};

/// gamma stops at 45 Hz: the pipeline's low-pass removes everything above.
inline constexpr std::array<BandEdges, kBandCount> kBands{{
    {Band::delta, "delta", 0.5, 4.0},
    {Band::theta, "theta", 4.0, 8.0},
    {Band::alpha, "alpha", 8.0, 13.0},
    {Band::beta, "beta", 13.0, 30.0},
    {Band::gamma, "gamma", 30.0, 45.0},
}};

/// Per-channel band powers, flattened channel-major: channel * 5 + band.
struct BandPowerVector {
  std::size_t channels = 0;
  std::vector<double> values;

  double at(std::size_t channel, Band b) const { return values.at(channel * kBandCount + static_cast<std::size_t>(b)); }
};

/// Integrates each band as sum of PSD * bin width over the bins whose center
/// falls in the band. Bins partition [0.5, 45] without overlap, so the result
/// is exactly additive in the PSD. Throws when the PSD stops below 45 Hz.
BandPowerVector band_powers(const PsdEstimate& psd);

}  // namespace mentalgen::spectral
