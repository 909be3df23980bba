#include "mentalgen/spectral/welch.hpp"

#include <cmath>
#include <numbers>

#include "mentalgen/simd/kernels.hpp"
#include "mentalgen/spectral/fft.hpp"

namespace mentalgen::spectral {

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

PsdEstimate welch_psd(const Matrix& signal, double sample_rate, std::size_t seg, double overlap_fraction) {
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample_rate must be positive");
  if (seg < 2) throw InvalidArgument("Welch segment must span at least 2 samples");
  if (seg > signal.cols())
    throw InvalidArgument("Welch segment of " + std::to_string(seg) + " samples exceeds epoch length " +
                          std::to_string(signal.cols()));
  if (!(overlap_fraction >= 0.0) || !(overlap_fraction < 1.0)) throw InvalidArgument("overlap_fraction must be in [0, 1)");

  const auto noverlap = static_cast<std::size_t>(std::floor(overlap_fraction * static_cast<double>(seg)));
  const std::size_t step = seg - noverlap;
  const std::size_t nseg = (signal.cols() - seg) / step + 1;
  const std::size_t nbins = seg / 2 + 1;
  const auto window = hann_window(seg);
  double wss = 0.0;
  for (double v : window) wss += v * v;
  const double scale = 1.0 / (sample_rate * wss * static_cast<double>(nseg));

  PsdEstimate out;
  out.freqs.resize(nbins);
  for (std::size_t k = 0; k < nbins; ++k) out.freqs[k] = static_cast<double>(k) * sample_rate / static_cast<double>(seg);
  out.power = Matrix(signal.rows(), nbins);

  std::vector<double> buf(seg);
  for (std::size_t ch = 0; ch < signal.rows(); ++ch) {
    auto acc = out.power.row(ch);
    const auto row = signal.row(ch);
    for (std::size_t s = 0; s < nseg; ++s) {
      const auto piece = row.subspan(s * step, seg);
      double mean = 0.0;
      for (double v : piece) mean += v;
      mean /= static_cast<double>(seg);
      for (std::size_t i = 0; i < seg; ++i) buf[i] = piece[i] - mean;
      simd::multiply(buf, window, buf);
      const auto spec = fft_real(buf);
      for (std::size_t k = 0; k < nbins; ++k) acc[k] += std::norm(spec[k]);
    }
    for (std::size_t k = 0; k < nbins; ++k) {
      const bool nyquist = (seg % 2 == 0) && k == seg / 2;
      acc[k] *= (k == 0 || nyquist) ? scale : 2.0 * scale;
    }
  }
  return out;
}

PsdEstimate welch_psd(const Epoch& epoch, std::size_t segment_samples, double overlap_fraction) {
  return welch_psd(epoch.data, epoch.sample_rate, segment_samples, overlap_fraction);
}

PsdEstimate welch_psd(const Epoch& epoch, const WelchConfig& cfg) {
  const std::size_t seg =
      cfg.segment_samples ? cfg.segment_samples : static_cast<std::size_t>(std::llround(epoch.sample_rate));
  return welch_psd(epoch, seg, cfg.overlap_fraction);
}

}  // namespace mentalgen::spectral
