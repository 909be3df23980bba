#include "mentalgen/core/linalg.hpp"

#include <Eigen/Dense>

namespace mentalgen::linalg {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

SymmetricEigen symmetric_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("symmetric_eigen: matrix not square");
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::Map<const RowMajor> m(a.flat().data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.transpose(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("symmetric_eigen: solver failed");

  SymmetricEigen out;
  out.values.resize(a.rows());
  out.vectors = Matrix(a.rows(), a.rows());
  // Eigen returns ascending order.
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = n - 1 - i;
    out.values[i] = solver.eigenvalues()(src);
    for (Eigen::Index j = 0; j < n; ++j) out.vectors(i, j) = solver.eigenvectors()(j, src);
  }
  return out;
}

std::vector<double> column_means(const Matrix& data) {
  std::vector<double> mean(data.cols(), 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r)
    for (std::size_t c = 0; c < data.cols(); ++c) mean[c] += data(r, c);
  for (auto& m : mean) m /= static_cast<double>(data.rows());
  return mean;
}

Matrix covariance(const Matrix& data) {
  if (data.rows() < 2) throw InvalidArgument("covariance: need at least 2 samples");
  const auto mean = column_means(data);
  const auto n = static_cast<Eigen::Index>(data.rows());
  const auto d = static_cast<Eigen::Index>(data.cols());
  Eigen::Map<const RowMajor> x(data.flat().data(), n, d);
  Eigen::Map<const Eigen::RowVectorXd> mu(mean.data(), d);
  const Eigen::MatrixXd centered = x.rowwise() - mu;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  Matrix out(data.cols(), data.cols());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = cov(i, j);
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("multiply: inner dimension mismatch");
  Matrix out(a.rows(), b.cols());
  Eigen::Map<const RowMajor> ma(a.flat().data(), a.rows(), a.cols());
  Eigen::Map<const RowMajor> mb(b.flat().data(), b.rows(), b.cols());
  Eigen::Map<RowMajor> mo(out.flat().data(), out.rows(), out.cols());
  mo.noalias() = ma * mb;
  return out;
}

}  // namespace mentalgen::linalg
