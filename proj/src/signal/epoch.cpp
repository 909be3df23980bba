#include "mentalgen/signal/epoch.hpp"

#include <algorithm>
#include <cmath>

namespace mentalgen {

std::size_t seconds_to_samples(double seconds, double sample_rate) {
  const double exact = seconds * sample_rate;
  const double rounded = std::round(exact);
  if (!std::isfinite(exact) || std::abs(exact - rounded) > 1e-6)
    throw InvalidArgument(std::to_string(seconds) + " s is not a whole number of samples at " +
                          std::to_string(sample_rate) + " Hz");
  return static_cast<std::size_t>(rounded);
}

std::vector<Epoch> epoch_windows(const EegRecording& rec, double window_s, double overlap_s, const SegmentLabel& label) {
  if (!(window_s > 0.0)) throw InvalidArgument("window must be positive");
  if (!(overlap_s >= 0.0) || !(overlap_s < window_s)) throw InvalidArgument("overlap must satisfy 0 <= overlap < window");
  const std::size_t window = seconds_to_samples(window_s, rec.sample_rate);
  const std::size_t overlap = seconds_to_samples(overlap_s, rec.sample_rate);
  const std::size_t step = window - overlap;
  if (window == 0) throw InvalidArgument("window shorter than one sample");
  if (rec.samples() < window)
    throw InvalidArgument("recording of " + std::to_string(rec.duration()) + " s is shorter than one window");

  const std::size_t count = epoch_count(rec.samples(), window, step);
  std::vector<Epoch> out;
  out.reserve(count);
  for (std::size_t e = 0; e < count; ++e) {
    const std::size_t start = e * step;
    Epoch ep{Matrix(rec.channels(), window), rec.sample_rate, static_cast<double>(start) / rec.sample_rate, label};
    for (std::size_t ch = 0; ch < rec.channels(); ++ch) {
      auto src = rec.data.row(ch).subspan(start, window);
      std::copy(src.begin(), src.end(), ep.data.row(ch).begin());
    }
    out.push_back(std::move(ep));
  }
  return out;
}

}  // namespace mentalgen
