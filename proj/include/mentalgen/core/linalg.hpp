#pragma once

#include <vector>

#include "mentalgen/core/matrix.hpp"

namespace mentalgen::linalg {

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // row i is the unit eigenvector for values[i]
};

/// Eigendecomposition of a symmetric matrix. Only the upper triangle is read.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Column means of a samples x features matrix.
std::vector<double> column_means(const Matrix& data);

/// Sample covariance (1 / (n - 1)) of a samples x features matrix.
Matrix covariance(const Matrix& data);

/// C = A * B
Matrix multiply(const Matrix& a, const Matrix& b);

}  // namespace mentalgen::linalg
