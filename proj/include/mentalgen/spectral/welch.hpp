#pragma once

#include <vector>

#include "mentalgen/signal/types.hpp"

namespace mentalgen::spectral {

/// One-sided power spectral density, uV^2/Hz.
struct PsdEstimate {
  std::vector<double> freqs;  // ascending bin centers, from 0
  Matrix power;               // channels x bins

  double resolution() const noexcept { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
};

struct WelchConfig {
  std::size_t segment_samples = 0;  // 0 selects one second of samples
  double overlap_fraction = 0.5;
};

/// Hann-windowed averaged periodogram with per-segment mean removal and
/// density scaling. `signal` is channels x samples.
PsdEstimate welch_psd(const Matrix& signal, double sample_rate, std::size_t segment_samples, double overlap_fraction);
PsdEstimate welch_psd(const Epoch& epoch, std::size_t segment_samples, double overlap_fraction);
PsdEstimate welch_psd(const Epoch& epoch, const WelchConfig& cfg = {});

/// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

}  // namespace mentalgen::spectral
