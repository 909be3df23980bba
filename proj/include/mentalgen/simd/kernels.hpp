#pragma once

// Data-parallel inner loops shared by the SVM kernel matrix, k-means and the
// cluster validity indices. Every routine has a scalar reference in
// kernels_scalar.cpp; vector variants must agree with it to rounding.

#include <cstddef>
#include <span>
#include <string_view>

#include "mentalgen/core/error.hpp"

namespace mentalgen::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// Table selected at first use: the widest supported ISA, unless the
/// MENTALGEN_SIMD environment variable names another ("scalar", "avx2").
const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("squared_distance: length mismatch");
  return active().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw InvalidArgument("axpy: length mismatch");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (a.size() != b.size() || a.size() != out.size()) throw InvalidArgument("multiply: length mismatch");
  active().multiply(a.data(), b.data(), out.data(), a.size());
}

}  // namespace mentalgen::simd
