#include "mentalgen/spectral/bands.hpp"

namespace mentalgen::spectral {

namespace {

bool in_band(const BandEdges& b, double f) {
  if (b.band == Band::gamma) return f >= b.low && f <= b.high;
  return f >= b.low && f < b.high;
}

}  // namespace

BandPowerVector band_powers(const PsdEstimate& psd) {
  if (psd.freqs.size() < 2) throw InvalidArgument("PSD needs at least two bins");
  if (psd.freqs.back() < kBands.back().high)
    throw InvalidArgument("PSD ends at " + std::to_string(psd.freqs.back()) + " Hz, below the 45 Hz band table");
  const double df = psd.resolution();
  BandPowerVector out{psd.power.rows(), std::vector<double>(psd.power.rows() * kBandCount, 0.0)};
  for (std::size_t ch = 0; ch < psd.power.rows(); ++ch) {
    const auto p = psd.power.row(ch);
    for (std::size_t b = 0; b < kBandCount; ++b) {
      double acc = 0.0;
      for (std::size_t k = 0; k < psd.freqs.size(); ++k)
        if (in_band(kBands[b], psd.freqs[k])) acc += p[k];
      out.values[ch * kBandCount + b] = acc * df;
    }
  }
  return out;
}

}  // namespace mentalgen::spectral
