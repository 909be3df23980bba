#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mentalgen/core/matrix.hpp"

namespace mentalgen {

/// Multichannel EEG time series. `data` is channels x samples, microvolts.
struct EegRecording {
  double sample_rate = 256.0;
  std::vector<std::string> channel_names;
  Matrix data;

  std::size_t channels() const noexcept { return data.rows(); }
  std::size_t samples() const noexcept { return data.cols(); }
  double duration() const noexcept { return sample_rate > 0 ? static_cast<double>(samples()) / sample_rate : 0.0; }

  /// Throws InvalidArgument / NonFiniteError when an invariant does not hold.
  void validate() const;
};

/// The 14 EPOC X electrode labels in device order.
std::vector<std::string> default_channel_names(std::size_t channels = 14);

/// The three decodable design commands. Order defines the model's class index.
enum class Command : std::uint8_t {
  IncreaseTransparency = 0,
  MoreLuxuriousDecoration = 1,
  MoreClassicalStyle = 2,
};

inline constexpr std::size_t kCommandCount = 3;
inline constexpr std::array<Command, kCommandCount> kAllCommands{
    Command::IncreaseTransparency, Command::MoreLuxuriousDecoration, Command::MoreClassicalStyle};

std::string_view to_string(Command c) noexcept;
/// Accepts the canonical names above; throws InvalidArgument otherwise.
Command parse_command(std::string_view name);
constexpr std::size_t index_of(Command c) noexcept { return static_cast<std::size_t>(c); }

enum class SpatialFeature : std::uint8_t { Transparency = 0, Style = 1, DecorationDensity = 2, ColorScheme = 3 };
inline constexpr std::size_t kFeatureCount = 4;
inline constexpr std::array<SpatialFeature, kFeatureCount> kAllFeatures{
    SpatialFeature::Transparency, SpatialFeature::Style, SpatialFeature::DecorationDensity,
    SpatialFeature::ColorScheme};
std::string_view to_string(SpatialFeature f) noexcept;

/// Signed scores in [-5, 5] for the four spatial features of one segment.
/// Positive means more transparent / more classical / denser decoration /
/// warmer colors.
struct FeatureLabels {
  double transparency = 0.0;
  double style = 0.0;
  double decoration_density = 0.0;
  double color_scheme = 0.0;

  double score(SpatialFeature f) const noexcept;
  /// |score| / 5
  double weight(SpatialFeature f) const noexcept;
  void validate() const;

  friend bool operator==(const FeatureLabels&, const FeatureLabels&) = default;
};

using SegmentLabel = std::variant<std::monostate, Command, FeatureLabels>;

/// One fixed-length analysis window cut from a recording.
struct Epoch {
  Matrix data;  // channels x window_samples
  double sample_rate = 256.0;
  double start_time = 0.0;  // seconds from recording start
  SegmentLabel label;
};

}  // namespace mentalgen
