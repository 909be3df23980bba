#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mentalgen/signal/types.hpp"

namespace fixture {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "mg") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" +
             std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline mentalgen::EegRecording sine(double freq, double fs, double seconds, std::size_t channels = 1,
                                    double amplitude = 1.0, double offset = 0.0) {
  mentalgen::EegRecording rec;
  rec.sample_rate = fs;
  rec.channel_names = mentalgen::default_channel_names(channels);
  const auto n = static_cast<std::size_t>(std::llround(seconds * fs));
  rec.data = mentalgen::Matrix(channels, n);
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t i = 0; i < n; ++i)
      rec.data(c, i) = offset + amplitude * std::sin(2 * std::numbers::pi * freq * static_cast<double>(i) / fs +
                                                     0.3 * static_cast<double>(c));
  return rec;
}

inline mentalgen::EegRecording white_noise(double fs, double seconds, std::size_t channels, double sigma,
                                           std::uint64_t seed) {
  mentalgen::EegRecording rec;
  rec.sample_rate = fs;
  rec.channel_names = mentalgen::default_channel_names(channels);
  const auto n = static_cast<std::size_t>(std::llround(seconds * fs));
  rec.data = mentalgen::Matrix(channels, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  for (double& v : rec.data.flat()) v = g(rng);
  return rec;
}

inline double rms(const std::vector<double>& x, std::size_t skip_front = 0, std::size_t skip_back = 0) {
  double s = 0;
  std::size_t n = 0;
  for (std::size_t i = skip_front; i + skip_back < x.size(); ++i, ++n) s += x[i] * x[i];
  return std::sqrt(s / static_cast<double>(n));
}

}  // namespace fixture
