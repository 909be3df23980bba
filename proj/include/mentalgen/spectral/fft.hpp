#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mentalgen::spectral {

/// Forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N), any N >= 1.
/// Radix-2 for powers of two, Bluestein's chirp-z otherwise.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x);

/// Forward DFT of a real sequence.
std::vector<std::complex<double>> fft_real(std::span<const double> x);

}  // namespace mentalgen::spectral
