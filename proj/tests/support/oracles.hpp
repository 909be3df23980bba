#pragma once

// Reference implementations used only by tests. None of these call into the
// library routines they check.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mentalgen/core/matrix.hpp"

namespace oracle {

/// Weighted purity by enumerating every assignment of a representative
/// direction to each cluster and keeping the best. `dirs` holds 0 / 1.
double purity_brute_force(std::span<const std::size_t> clusters, std::span<const int> dirs,
                          std::span<const double> weights);

/// Classical purity: majority count per cluster over N.
double classical_purity(std::span<const std::size_t> clusters, std::span<const int> classes);

struct VParts {
  double v, homogeneity, completeness;
};
/// V-measure via mutual information: h = I(C;K) / H(C), c = I(C;K) / H(K).
/// Samples with weight 0 are skipped.
VParts v_measure_mi(std::span<const std::size_t> clusters, std::span<const int> dirs, std::span<const double> weights);

/// Mean silhouette straight from the definition, O(N^2).
double silhouette_direct(const mentalgen::Matrix& x, std::span<const std::size_t> a);
/// Calinski-Harabasz from the definition.
double calinski_harabasz_direct(const mentalgen::Matrix& x, std::span<const std::size_t> a);

/// Naive O(N^2) DFT.
std::vector<std::complex<double>> dft(std::span<const double> x);
/// One-sided rectangular-window periodogram of the full signal, uV^2/Hz.
std::vector<double> periodogram(std::span<const double> x, double fs);

/// Magnitude of a digital Butterworth filter designed by the bilinear
/// transform with pre-warping.
double butterworth_lowpass_mag(double f, double fc, double fs, int order);
double butterworth_highpass_mag(double f, double fc, double fs, int order);

/// Population variance.
double variance(std::span<const double> x);

/// Eigenvectors of a symmetric 2x2 matrix in closed form; rows, largest
/// eigenvalue first.
struct Eig2 {
  double values[2];
  double vectors[2][2];
};
Eig2 eig2(double a, double b, double d);

/// Stratified k-fold nearest-centroid accuracy over z-scored rows.
double nearest_centroid_cv(const mentalgen::Matrix& x, std::span<const int> y, std::size_t folds);
/// Training-set nearest-centroid accuracy.
double nearest_centroid_fit_accuracy(const mentalgen::Matrix& x, std::span<const int> y);

/// Largest KKT violation recomputed from the dual: alphas from coefficients,
/// decision values summed directly.
double kkt_violation(const mentalgen::Matrix& x, std::span<const int> y, const mentalgen::Matrix& sv,
                     std::span<const double> coef, std::span<const std::size_t> sv_index, double bias, double gamma,
                     double C);

/// Softmax written out with exp of the raw values.
std::vector<double> softmax_naive(std::span<const double> v);

}  // namespace oracle
