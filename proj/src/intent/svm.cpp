#include "mentalgen/intent/svm.hpp"

#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "mentalgen/simd/kernels.hpp"

namespace mentalgen::intent {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  return std::exp(-gamma * simd::squared_distance(a, b));
}

double BinarySvm::decision(std::span<const double> x) const {
  if (x.size() != support_vectors.cols()) throw InvalidArgument("decision: dimension mismatch");
  double f = bias;
  for (std::size_t i = 0; i < dual_coef.size(); ++i) f += dual_coef[i] * rbf_kernel(support_vectors.row(i), x, gamma);
  return f;
}

namespace {

// Rows of Q_ij = y_i y_j K(x_i, x_j), kept in an LRU cache bounded in bytes.
class KernelRows {
 public:
  KernelRows(const Matrix& x, std::span<const int> y, double gamma, std::size_t budget_bytes = 256u << 20)
      : x_(x), y_(y), gamma_(gamma) {
    const std::size_t row_bytes = std::max<std::size_t>(x.rows() * sizeof(double), 1);
    capacity_ = std::max<std::size_t>(budget_bytes / row_bytes, 2);
  }

  std::span<const double> row(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    std::vector<double> values(x_.rows());
    for (std::size_t j = 0; j < x_.rows(); ++j)
      values[j] = static_cast<double>(y_[i] * y_[j]) * rbf_kernel(x_.row(i), x_.row(j), gamma_);
    lru_.emplace_front(i, std::move(values));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  using Entry = std::pair<std::size_t, std::vector<double>>;
  const Matrix& x_;
  std::span<const int> y_;
  double gamma_;
  std::size_t capacity_;
  std::list<Entry> lru_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

constexpr double kTau = 1e-12;

}  // namespace

BinarySvm train_binary_svm(const Matrix& x, std::span<const int> y, double C, double gamma, const SmoOptions& opts) {
  const std::size_t n = x.rows();
  if (y.size() != n) throw InvalidArgument("labels length != sample count");
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw InvalidArgument("labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw InvalidArgument("binary SVM needs both classes");

  const std::size_t max_iter = opts.max_iterations ? opts.max_iterations : std::max<std::size_t>(10'000'000, 100 * n);
  KernelRows q(x, y, gamma);
  std::vector<double> alpha(n, 0.0), grad(n, -1.0);
  auto in_up = [&](std::size_t t) { return (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0.0); };
  auto in_low = [&](std::size_t t) { return (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < C); };

  BinarySvm model;
  model.gamma = gamma;
  model.C = C;
  model.converged = false;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    std::size_t i = n, j = n;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -static_cast<double>(y[t]) * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < opts.tol) {
      model.converged = true;
      break;
    }

    const auto qi = q.row(i);
    const auto qj = q.row(j);
    const double old_ai = alpha[i], old_aj = alpha[j];
    // Q_ii = Q_jj = 1 for the RBF kernel.
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = sum;
        }
      }
    }
    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * dai + qj[t] * daj;
  }
  model.iterations = iter;

  // Offset from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = static_cast<double>(y[t]) * grad[t];
    if (alpha[t] >= C) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  model.bias = -rho;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_indices.push_back(t);
      model.dual_coef.push_back(alpha[t] * static_cast<double>(y[t]));
    }
  }
  model.support_vectors = x.select_rows(model.support_indices);
  return model;
}

double max_kkt_violation(const BinarySvm& model, const Matrix& x, std::span<const int> y) {
  if (y.size() != x.rows()) throw InvalidArgument("labels length != sample count");
  std::vector<double> alpha(x.rows(), 0.0);
  for (std::size_t s = 0; s < model.support_indices.size(); ++s)
    alpha[model.support_indices[s]] = std::abs(model.dual_coef[s]);
  double worst = 0.0;
  for (std::size_t t = 0; t < x.rows(); ++t) {
    const double margin = static_cast<double>(y[t]) * model.decision(x.row(t)) - 1.0;
    double v;
    if (alpha[t] <= 0.0) v = std::max(0.0, -margin);
    else if (alpha[t] >= model.C) v = std::max(0.0, margin);
    else v = std::abs(margin);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace mentalgen::intent
