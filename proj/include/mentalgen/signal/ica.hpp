#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mentalgen/signal/types.hpp"

namespace mentalgen {

struct IcaConfig {
  std::size_t max_iterations = 500;
  double tolerance = 1e-5;
  /// Components whose |excess kurtosis| exceeds this are rejected in
  /// automatic mode.
  double kurtosis_threshold = 5.0;
  /// When set, exactly these component indices are rejected (manual mode).
  std::optional<std::vector<std::size_t>> manual_reject;
  std::uint64_t seed = 0;
};

enum class IcaStatus { ok, not_converged };

/// FastICA decomposition: x(t) = mean + mixing * sources(t).
struct IcaDecomposition {
  std::vector<double> mean;  // per channel
  Matrix unmixing;           // components x channels
  Matrix mixing;             // channels x components
  Matrix sources;            // components x samples
  std::vector<double> excess_kurtosis;
  bool converged = false;
  std::size_t iterations = 0;  // worst component
};

/// Deflationary FastICA with tanh contrast, whitened through the
/// eigendecomposition of the channel covariance.
IcaDecomposition fast_ica(const EegRecording& rec, const IcaConfig& cfg);

/// mean + mixing * sources with the `rejected` component rows set to zero.
EegRecording reconstruct(const EegRecording& like, const IcaDecomposition& ica, std::span<const std::size_t> rejected);

struct IcaResult {
  EegRecording cleaned;
  std::vector<std::size_t> rejected;
  IcaStatus status = IcaStatus::ok;
  std::vector<double> excess_kurtosis;
};

/// Requires >= 2 channels and samples >= 20 * channels. When FastICA does not
/// converge the input is returned unchanged with status not_converged.
IcaResult remove_artifacts_ica(const EegRecording& rec, const IcaConfig& cfg);

/// Sample excess kurtosis m4 / m2^2 - 3; 0 for a constant series.
double excess_kurtosis(std::span<const double> x);

}  // namespace mentalgen
