#include "mentalgen/signal/types.hpp"

#include <cmath>

namespace mentalgen {

void EegRecording::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw InvalidArgument("sample_rate must be positive");
  if (!channel_names.empty() && channel_names.size() != data.rows())
    throw InvalidArgument("channel_names size " + std::to_string(channel_names.size()) + " != channels " +
                          std::to_string(data.rows()));
  const auto flat = data.flat();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!std::isfinite(flat[i])) {
      throw NonFiniteError("non-finite sample at channel " + std::to_string(i / data.cols()) + ", index " +
                           std::to_string(i % data.cols()));
    }
  }
}

std::vector<std::string> default_channel_names(std::size_t channels) {
  static const std::array<const char*, 14> kEpoc{"AF3", "F7", "F3", "FC5", "T7", "P7", "O1",
                                                 "O2",  "P8", "T8", "FC6", "F4", "F8", "AF4"};
  std::vector<std::string> out;
  out.reserve(channels);
  for (std::size_t i = 0; i < channels; ++i)
    out.emplace_back(i < kEpoc.size() ? std::string(kEpoc[i]) : "CH" + std::to_string(i + 1));
  return out;
}

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::IncreaseTransparency: return "IncreaseTransparency";
    case Command::MoreLuxuriousDecoration: return "MoreLuxuriousDecoration";
    case Command::MoreClassicalStyle: return "MoreClassicalStyle";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (Command c : kAllCommands)
    if (to_string(c) == name) return c;
  throw InvalidArgument("unknown command '" + std::string(name) + "'");
}

std::string_view to_string(SpatialFeature f) noexcept {
  switch (f) {
    case SpatialFeature::Transparency: return "transparency";
    case SpatialFeature::Style: return "style";
    case SpatialFeature::DecorationDensity: return "decoration_density";
    case SpatialFeature::ColorScheme: return "color_scheme";
  }
  return "?";
}

double FeatureLabels::score(SpatialFeature f) const noexcept {
  switch (f) {
    case SpatialFeature::Transparency: return transparency;
    case SpatialFeature::Style: return style;
    case SpatialFeature::DecorationDensity: return decoration_density;
    case SpatialFeature::ColorScheme: return color_scheme;
  }
  return 0.0;
}

double FeatureLabels::weight(SpatialFeature f) const noexcept { return std::abs(score(f)) / 5.0; }

void FeatureLabels::validate() const {
  for (SpatialFeature f : kAllFeatures) {
    const double s = score(f);
    if (!std::isfinite(s) || s < -5.0 || s > 5.0)
      throw InvalidArgument(std::string(to_string(f)) + " score out of [-5, 5]");
  }
}

}  // namespace mentalgen
