#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mentalgen/signal/types.hpp"

namespace mentalgen {

/// Band-pass specification. `order` is the Butterworth order of each edge
/// (high-pass at low_cut and low-pass at high_cut).
struct FilterSpec {
  double low_cut = 0.5;
  double high_cut = 45.0;
  int order = 8;

  /// Throws InvalidArgument unless 0 < low_cut < high_cut < sample_rate / 2.
  void validate(double sample_rate) const;
};

/// Normalized second-order section, a0 == 1.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;
};

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate);
std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double sample_rate);
/// High-pass sections followed by low-pass sections.
std::vector<Biquad> butterworth_bandpass(const FilterSpec& spec, double sample_rate);

/// H(e^{jw}) of the cascade at `freq_hz`.
std::complex<double> frequency_response(std::span<const Biquad> sos, double freq_hz, double sample_rate);

/// Causal cascade filtering, zero initial state.
std::vector<double> sosfilt(std::span<const Biquad> sos, std::span<const double> x);

/// Zero-phase forward-backward filtering with mirror (even) padding of up to
/// `padlen` samples and steady-state initial conditions.
std::vector<double> sosfiltfilt(std::span<const Biquad> sos, std::span<const double> x, std::size_t padlen);

/// Per-channel zero-phase band-pass. Output has the input's dimensions.
EegRecording bandpass_filter(const EegRecording& rec, const FilterSpec& spec);

}  // namespace mentalgen
