#pragma once

#include <string>
#include <vector>

#include "mentalgen/signal/filter.hpp"
#include "mentalgen/signal/ica.hpp"
#include "mentalgen/spectral/welch.hpp"

namespace mentalgen::spectral {

enum class FeatureKind {
  log_band_power,  // channels x 5
  log_psd_bins,    // channels x (bins in [0.5, 45] Hz)
};

std::string_view to_string(FeatureKind k) noexcept;
FeatureKind parse_feature_kind(std::string_view s);

/// Raw recording -> feature rows. Filter, optional ICA, 2 s / 0.5 s windows,
/// Welch PSD, then log band powers (default) or log PSD bins.
struct FeatureConfig {
  FilterSpec filter;
  bool apply_ica = false;
  IcaConfig ica;
  double window_s = 2.0;
  double overlap_s = 0.5;
  WelchConfig welch;
  FeatureKind kind = FeatureKind::log_band_power;
  /// Subtract each channel's mean log power from its features, which makes
  /// them invariant to per-channel gain.
  bool channel_relative = true;

  /// Stable description of every field that changes feature values.
  std::string fingerprint() const;
};

/// Filter (and ICA when enabled) a raw recording.
EegRecording preprocess(const EegRecording& raw, const FeatureConfig& cfg);

/// Features of one preprocessed window.
std::vector<double> window_features(const Epoch& epoch, const FeatureConfig& cfg);

/// One row per window of the preprocessed recording.
Matrix recording_features(const EegRecording& raw, const FeatureConfig& cfg);

/// Log PSD bins in [0.5, 45] Hz over the whole preprocessed segment, all
/// channels flattened; input of the clustering path before PCA.
std::vector<double> segment_psd_features(const EegRecording& raw, const FeatureConfig& cfg);

}  // namespace mentalgen::spectral
