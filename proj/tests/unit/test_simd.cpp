#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string_view>

#include "mentalgen/simd/kernels.hpp"

using namespace mentalgen::simd;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v;
  if (auto* t = avx2_kernels()) v.push_back(t);
  if (auto* t = neon_kernels()) v.push_back(t);
  return v;
}

}  // namespace

TEST_CASE("vector kernels agree with the scalar reference") {
  const auto& ref = scalar_kernels();
  CHECK(ref.isa == Isa::scalar);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 10);
  for (const KernelTable* t : variants()) {
    INFO("isa " << to_string(t->isa));
    for (std::size_t n = 0; n < 70; ++n) {
      std::vector<double> a(n), b(n);
      for (auto& v : a) v = g(rng);
      for (auto& v : b) v = g(rng);
      double mag = 1;
      for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]) + (a[i] - b[i]) * (a[i] - b[i]);
      CHECK(std::fabs(t->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-12 * mag);
      CHECK(std::fabs(t->squared_distance(a.data(), b.data(), n) - ref.squared_distance(a.data(), b.data(), n)) <=
            1e-12 * mag);
      auto y1 = b, y2 = b;
      t->axpy(0.37, a.data(), y1.data(), n);
      ref.axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
      std::vector<double> m1(n), m2(n);
      t->multiply(a.data(), b.data(), m1.data(), n);
      ref.multiply(a.data(), b.data(), m2.data(), n);
      CHECK(m1 == m2);
    }
  }
}

TEST_CASE("dispatch picks a supported table") {
  const auto& k = active();
  CHECK((k.isa == Isa::scalar || (k.isa == Isa::avx2 && avx2_kernels()) || (k.isa == Isa::neon && neon_kernels())));
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(dot(a, b) == 32.0);
  CHECK(squared_distance(a, b) == 27.0);
  CHECK_THROWS(dot(a, std::vector<double>{1.0}));
}

TEST_CASE("isa names") {
  CHECK(to_string(Isa::avx2) == "avx2");
  CHECK(to_string(Isa::scalar) == "scalar");
}

TEST_CASE("environment selects the table") {
  const char* want = std::getenv("MENTALGEN_SIMD");
  if (want && std::string_view(want) == "scalar") CHECK(active().isa == Isa::scalar);
}
