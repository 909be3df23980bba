#pragma once

#include <span>
#include <vector>

#include "mentalgen/core/matrix.hpp"

namespace mentalgen::intent {

/// exp(-gamma * ||a - b||^2)
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Trained binary RBF machine: f(x) = sum_i coef_i K(sv_i, x) + bias with
/// coef_i = alpha_i * y_i.
struct BinarySvm {
  Matrix support_vectors;
  std::vector<double> dual_coef;
  std::vector<std::size_t> support_indices;  // rows of the training matrix
  double bias = 0.0;
  double gamma = 1.0;
  double C = 1.0;
  std::size_t iterations = 0;
  bool converged = true;

  double decision(std::span<const double> x) const;
};

struct SmoOptions {
  double tol = 1e-3;
  /// 0 selects max(10'000'000, 100 * samples).
  std::size_t max_iterations = 0;
};

/// SMO on the soft-margin dual, working pair chosen as the maximal KKT
/// violating pair; stops once the violation gap drops below `tol`.
/// `y` entries must be +1 or -1 with both classes present.
BinarySvm train_binary_svm(const Matrix& x, std::span<const int> y, double C, double gamma,
                           const SmoOptions& opts = {});

/// Largest KKT violation of `model` on its training set:
/// alpha = 0 needs y f >= 1, 0 < alpha < C needs y f = 1, alpha = C needs
/// y f <= 1. Alphas are read back from the support set.
double max_kkt_violation(const BinarySvm& model, const Matrix& x, std::span<const int> y);

}  // namespace mentalgen::intent
