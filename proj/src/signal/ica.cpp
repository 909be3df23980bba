#include "mentalgen/signal/ica.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mentalgen/core/linalg.hpp"
#include "mentalgen/core/random.hpp"
#include "mentalgen/simd/kernels.hpp"

namespace mentalgen {

double excess_kurtosis(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= static_cast<double>(x.size());
  m4 /= static_cast<double>(x.size());
  if (m2 <= 0.0) return 0.0;
  return m4 / (m2 * m2) - 3.0;
}

namespace {

void check_preconditions(const EegRecording& rec) {
  if (rec.channels() < 2) throw InvalidArgument("ICA needs at least 2 channels");
  if (rec.samples() < 20 * rec.channels())
    throw InvalidArgument("ICA needs at least 20 samples per channel (" + std::to_string(20 * rec.channels()) +
                          "), got " + std::to_string(rec.samples()));
}

}  // namespace

IcaDecomposition fast_ica(const EegRecording& rec, const IcaConfig& cfg) {
  check_preconditions(rec);
  const std::size_t nch = rec.channels();
  const std::size_t ns = rec.samples();
  const double inv_n = 1.0 / static_cast<double>(ns);

  IcaDecomposition out;
  out.mean.assign(nch, 0.0);
  Matrix centered = rec.data;
  for (std::size_t c = 0; c < nch; ++c) {
    auto row = centered.row(c);
    double m = 0.0;
    for (double v : row) m += v;
    m *= inv_n;
    out.mean[c] = m;
    for (double& v : row) v -= m;
  }

  Matrix cov(nch, nch);
  for (std::size_t i = 0; i < nch; ++i)
    for (std::size_t j = i; j < nch; ++j) {
      const double v = simd::dot(centered.row(i), centered.row(j)) * inv_n;
      cov(i, j) = v;
      cov(j, i) = v;
    }
  const auto eig = linalg::symmetric_eigen(cov);

  // Keep directions carrying non-negligible variance.
  std::size_t ncomp = 0;
  const double floor = std::max(eig.values.front(), 0.0) * 1e-12;
  while (ncomp < nch && eig.values[ncomp] > floor) ++ncomp;
  if (ncomp == 0) throw InvalidArgument("ICA input has zero variance");

  Matrix whitening(ncomp, nch);    // D^-1/2 E^T
  Matrix dewhitening(nch, ncomp);  // E D^1/2
  for (std::size_t k = 0; k < ncomp; ++k) {
    const double s = std::sqrt(eig.values[k]);
    for (std::size_t c = 0; c < nch; ++c) {
      whitening(k, c) = eig.vectors(k, c) / s;
      dewhitening(c, k) = eig.vectors(k, c) * s;
    }
  }
  const Matrix z = linalg::multiply(whitening, centered);  // ncomp x ns

  Matrix w(ncomp, ncomp);
  Rng rng(cfg.seed);
  std::normal_distribution<double> normal;
  std::vector<double> proj(ns), wnew(ncomp);
  out.converged = true;

  for (std::size_t p = 0; p < ncomp; ++p) {
    std::vector<double> wp(ncomp);
    for (double& v : wp) v = normal(rng);
    auto normalize = [](std::vector<double>& v) {
      double n = std::sqrt(simd::dot(v, v));
      for (double& x : v) x /= n;
    };
    auto deflate = [&](std::vector<double>& v) {
      for (std::size_t q = 0; q < p; ++q) simd::axpy(-simd::dot(v, w.row(q)), w.row(q), v);
    };
    deflate(wp);
    normalize(wp);

    bool done = false;
    std::size_t it = 0;
    while (it < cfg.max_iterations && !done) {
      ++it;
      // proj = w^T z
      std::fill(proj.begin(), proj.end(), 0.0);
      for (std::size_t k = 0; k < ncomp; ++k) simd::axpy(wp[k], z.row(k), proj);
      double mean_gprime = 0.0;
      for (double& v : proj) {
        const double g = std::tanh(v);
        mean_gprime += 1.0 - g * g;
        v = g;
      }
      mean_gprime *= inv_n;
      for (std::size_t k = 0; k < ncomp; ++k) wnew[k] = simd::dot(z.row(k), proj) * inv_n - mean_gprime * wp[k];
      deflate(wnew);
      normalize(wnew);
      const double lim = std::abs(std::abs(simd::dot(wnew, wp)) - 1.0);
      wp = wnew;
      done = lim < cfg.tolerance;
    }
    out.iterations = std::max(out.iterations, it);
    if (!done) out.converged = false;
    std::copy(wp.begin(), wp.end(), w.row(p).begin());
  }

  out.unmixing = linalg::multiply(w, whitening);      // ncomp x nch
  out.mixing = linalg::multiply(dewhitening, w.transposed());  // nch x ncomp, W orthonormal
  out.sources = linalg::multiply(w, z);
  out.excess_kurtosis.resize(ncomp);
  for (std::size_t k = 0; k < ncomp; ++k) out.excess_kurtosis[k] = excess_kurtosis(out.sources.row(k));
  return out;
}

EegRecording reconstruct(const EegRecording& like, const IcaDecomposition& ica, std::span<const std::size_t> rejected) {
  const std::size_t nch = ica.mixing.rows();
  const std::size_t ncomp = ica.mixing.cols();
  const std::size_t ns = ica.sources.cols();
  std::vector<bool> drop(ncomp, false);
  for (std::size_t r : rejected) {
    if (r >= ncomp) throw InvalidArgument("rejected component index out of range");
    drop[r] = true;
  }
  EegRecording out{like.sample_rate, like.channel_names, Matrix(nch, ns)};
  for (std::size_t c = 0; c < nch; ++c) {
    auto row = out.data.row(c);
    std::fill(row.begin(), row.end(), ica.mean[c]);
    for (std::size_t k = 0; k < ncomp; ++k)
      if (!drop[k]) simd::axpy(ica.mixing(c, k), ica.sources.row(k), row);
  }
  return out;
}

IcaResult remove_artifacts_ica(const EegRecording& rec, const IcaConfig& cfg) {
  check_preconditions(rec);
  const auto ica = fast_ica(rec, cfg);
  IcaResult result;
  result.excess_kurtosis = ica.excess_kurtosis;
  if (!ica.converged) {
    result.cleaned = rec;
    result.status = IcaStatus::not_converged;
    return result;
  }
  if (cfg.manual_reject) {
    result.rejected = *cfg.manual_reject;
    std::sort(result.rejected.begin(), result.rejected.end());
    result.rejected.erase(std::unique(result.rejected.begin(), result.rejected.end()), result.rejected.end());
  } else {
    for (std::size_t k = 0; k < ica.excess_kurtosis.size(); ++k)
      if (std::abs(ica.excess_kurtosis[k]) > cfg.kurtosis_threshold) result.rejected.push_back(k);
  }
  result.cleaned = result.rejected.empty() ? rec : reconstruct(rec, ica, result.rejected);
  return result;
}

}  // namespace mentalgen
