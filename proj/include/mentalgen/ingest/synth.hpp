#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mentalgen/ingest/dataset.hpp"
#include "mentalgen/spectral/bands.hpp"

namespace mentalgen::ingest {

/// Amplitude multiplier per band (delta..gamma) for one class.
struct ClassSignature {
  SegmentLabel label;
  std::array<double, spectral::kBandCount> band_gain{1.0, 1.0, 1.0, 1.0, 1.0};
};

/// Each segment is, per channel, a sum of `tones_per_band` sinusoids in each
/// band interior with amplitude band_amplitude * band_gain * channel gain
/// (uniform 0.8..1.2), random phase, plus white Gaussian noise of
/// `noise_sigma`. Segment i of class c draws from derive_seed(seed, c, i).
struct SynthSpec {
  std::size_t n_per_class = 20;
  double sample_rate = 256.0;
  std::size_t channels = 14;
  double duration_s = 2.0;
  std::vector<ClassSignature> classes;
  double noise_sigma = 0.0;
  double band_amplitude = 5.0;  // microvolts
  std::size_t tones_per_band = 3;
  std::uint64_t seed = 0;
  std::string participant_id = "synth";

  void validate() const;
};

/// Interior frequency ranges the tones are drawn from, kept clear of band
/// edges so each tone's power lands in one band.
inline constexpr std::array<std::array<double, 2>, spectral::kBandCount> kToneRanges{{
    {1.0, 3.0}, {5.0, 7.0}, {9.0, 12.0}, {14.0, 29.0}, {31.0, 44.0}}};

/// Segments ordered class by class.
LabeledSegmentSet synth_generate(const SynthSpec& spec);

/// Three command classes: alpha raised for IncreaseTransparency, beta for
/// MoreLuxuriousDecoration, theta for MoreClassicalStyle.
SynthSpec command_synth_spec(std::size_t n_per_class, double noise_sigma, std::uint64_t seed,
                             double duration_s = 2.0, double gain = 3.0);

/// Feature-labeled classes for the clustering path. Each class gets its own
/// band signature and a FeatureLabels value; scores are varied per class so
/// every spatial feature has both signs present.
SynthSpec feature_synth_spec(std::size_t classes, std::size_t n_per_class, double noise_sigma, std::uint64_t seed);

/// Isotropic Gaussian blobs, for cluster-model selection fixtures.
struct BlobFixture {
  Matrix points;
  std::vector<std::size_t> truth;
  Matrix centers;
};

/// `k` centers placed on a circle of radius `separation` (2-D) or on
/// scaled unit axes (higher dims), `per_blob` points each with std `spread`.
BlobFixture gaussian_blobs(std::size_t k, std::size_t per_blob, std::size_t dims, double separation, double spread,
                           std::uint64_t seed);

/// The standard five-blob fixture: k = 5, 40 points each, 2-D, well separated.
BlobFixture five_blob_fixture(std::uint64_t seed = 7);

}  // namespace mentalgen::ingest
