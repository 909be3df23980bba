#include "mentalgen/signal/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mentalgen {

void FilterSpec::validate(double sample_rate) const {
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample_rate must be positive");
  if (order < 1) throw InvalidArgument("filter order must be positive");
  if (!(low_cut > 0.0)) throw InvalidArgument("low_cut must be positive");
  if (!(low_cut < high_cut)) throw InvalidArgument("low_cut must be below high_cut");
  if (!(high_cut < sample_rate / 2.0)) throw InvalidArgument("high_cut must be below Nyquist");
}

namespace {

enum class Kind { lowpass, highpass };

// Analog Butterworth prototype mapped through the bilinear transform with
// pre-warping, s = (z - 1) / (z + 1), so the cutoff lands exactly at
// warped = tan(pi fc / fs).
std::vector<Biquad> design(Kind kind, int order, double cutoff_hz, double sample_rate) {
  if (order < 1) throw InvalidArgument("filter order must be positive");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate / 2.0)) throw InvalidArgument("cutoff outside (0, Nyquist)");
  const double w = std::tan(std::numbers::pi * cutoff_hz / sample_rate);
  std::vector<Biquad> sos;

  for (int k = 1; k <= order / 2; ++k) {
    // Conjugate pole pair: s^2 + q s + 1 on the unit-cutoff prototype.
    const double q = 2.0 * std::sin(std::numbers::pi * (2.0 * k - 1.0) / (2.0 * order));
    const double a0 = 1.0 + q * w + w * w;
    Biquad s;
    s.a1 = (2.0 * w * w - 2.0) / a0;
    s.a2 = (1.0 - q * w + w * w) / a0;
    if (kind == Kind::lowpass) {
      s.b0 = w * w / a0;
      s.b1 = 2.0 * w * w / a0;
      s.b2 = w * w / a0;
    } else {
      s.b0 = 1.0 / a0;
      s.b1 = -2.0 / a0;
      s.b2 = 1.0 / a0;
    }
    sos.push_back(s);
  }
  if (order % 2 == 1) {
    const double a0 = 1.0 + w;
    Biquad s;
    s.a1 = (w - 1.0) / a0;
    s.a2 = 0.0;
    if (kind == Kind::lowpass) {
      s.b0 = w / a0;
      s.b1 = w / a0;
    } else {
      s.b0 = 1.0 / a0;
      s.b1 = -1.0 / a0;
    }
    s.b2 = 0.0;
    sos.push_back(s);
  }
  return sos;
}

// Transposed direct form II state for a unit step settled at steady state.
std::pair<double, double> steady_state(const Biquad& s) {
  const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  const double z2 = s.b2 - s.a2 * gain;
  const double z1 = s.b1 - s.a1 * gain + z2;
  return {z1, z2};
}

double dc_gain(const Biquad& s) { return (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2); }

void filter_in_place(std::span<const Biquad> sos, std::vector<double>& x, double initial_level) {
  double level = initial_level;
  for (const Biquad& s : sos) {
    auto [z1, z2] = steady_state(s);
    z1 *= level;
    z2 *= level;
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
    level *= dc_gain(s);
  }
}

}  // namespace

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate) {
  return design(Kind::lowpass, order, cutoff_hz, sample_rate);
}

std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double sample_rate) {
  return design(Kind::highpass, order, cutoff_hz, sample_rate);
}

std::vector<Biquad> butterworth_bandpass(const FilterSpec& spec, double sample_rate) {
  spec.validate(sample_rate);
  auto sos = butterworth_highpass(spec.order, spec.low_cut, sample_rate);
  auto lp = butterworth_lowpass(spec.order, spec.high_cut, sample_rate);
  sos.insert(sos.end(), lp.begin(), lp.end());
  return sos;
}

std::complex<double> frequency_response(std::span<const Biquad> sos, double freq_hz, double sample_rate) {
  const double omega = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  const std::complex<double> zi1 = std::polar(1.0, -omega);
  const std::complex<double> zi2 = zi1 * zi1;
  std::complex<double> h = 1.0;
  for (const Biquad& s : sos) h *= (s.b0 + s.b1 * zi1 + s.b2 * zi2) / (1.0 + s.a1 * zi1 + s.a2 * zi2);
  return h;
}

std::vector<double> sosfilt(std::span<const Biquad> sos, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  filter_in_place(sos, y, 0.0);
  return y;
}

std::vector<double> sosfiltfilt(std::span<const Biquad> sos, std::span<const double> x, std::size_t padlen) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  padlen = std::min(padlen, n - 1);

  std::vector<double> ext;
  ext.reserve(n + 2 * padlen);
  for (std::size_t i = padlen; i >= 1; --i) ext.push_back(x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= padlen; ++i) ext.push_back(x[n - 1 - i]);

  filter_in_place(sos, ext, ext.front());
  std::reverse(ext.begin(), ext.end());
  filter_in_place(sos, ext, ext.front());
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(padlen), ext.begin() + static_cast<std::ptrdiff_t>(padlen + n)};
}

EegRecording bandpass_filter(const EegRecording& rec, const FilterSpec& spec) {
  spec.validate(rec.sample_rate);
  const auto sos = butterworth_bandpass(spec, rec.sample_rate);
  // Long enough for the high-pass edge to settle: three time constants.
  const auto padlen = static_cast<std::size_t>(std::ceil(3.0 * rec.sample_rate / spec.low_cut));

  EegRecording out{rec.sample_rate, rec.channel_names, Matrix(rec.channels(), rec.samples())};
  for (std::size_t ch = 0; ch < rec.channels(); ++ch) {
    const auto y = sosfiltfilt(sos, rec.data.row(ch), padlen);
    std::copy(y.begin(), y.end(), out.data.row(ch).begin());
  }
  return out;
}

}  // namespace mentalgen
