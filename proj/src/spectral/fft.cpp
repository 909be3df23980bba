#include "mentalgen/spectral/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace mentalgen::spectral {
namespace {

using cd = std::complex<double>;

void radix2(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Direct twiddles: recurrence drift matters at n in the thousands.
        const cd w = std::polar(1.0, ang * static_cast<double>(k));
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse)
    for (auto& v : a) v /= static_cast<double>(n);
}

std::vector<cd> bluestein(std::span<const cd> x) {
  const std::size_t n = x.size();
  const std::size_t m = std::bit_ceil(2 * n - 1);
  std::vector<cd> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small.
    const auto kk = static_cast<double>((k * k) % (2 * n));
    chirp[k] = std::polar(1.0, -std::numbers::pi * kk / static_cast<double>(n));
  }
  std::vector<cd> a(m, 0.0), b(m, 0.0);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  radix2(a, false);
  radix2(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  radix2(a, true);
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
  return out;
}

}  // namespace

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x) {
  if (x.empty()) return {};
  if (std::has_single_bit(x.size())) {
    std::vector<cd> a(x.begin(), x.end());
    radix2(a, false);
    return a;
  }
  return bluestein(x);
}

std::vector<std::complex<double>> fft_real(std::span<const double> x) {
  std::vector<cd> c(x.begin(), x.end());
  return fft(c);
}

}  // namespace mentalgen::spectral
