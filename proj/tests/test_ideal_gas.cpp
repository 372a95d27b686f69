#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/ideal_gas.hpp"

using namespace qcorr;

namespace {

// Cofactor expansion along the first row; exponential but fine for n <= 8.
std::int64_t cofactor_det(const std::vector<std::vector<std::int64_t>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  std::int64_t det = 0;
  for (std::size_t col = 0; col < n; ++col) {
    if (a[0][col] == 0) continue;
    std::vector<std::vector<std::int64_t>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<std::int64_t> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != col) row.push_back(a[i][j]);
      minor.push_back(row);
    }
    det += (col % 2 == 0 ? 1 : -1) * a[0][col] * cofactor_det(minor);
  }
  return det;
}

}  // namespace

TEST_CASE("loop coefficients") {
  CHECK(ideal_loop_coeff(1, Statistics::boson) == 1.0);
  CHECK(ideal_loop_coeff(2, Statistics::boson) == std::pow(2.0, -2.5));
  CHECK(ideal_loop_coeff(2, Statistics::fermion) == -std::pow(2.0, -2.5));
  CHECK(ideal_loop_coeff(3, Statistics::fermion) == std::pow(3.0, -2.5));
  CHECK(std::abs(ideal_loop_coeff(2, Statistics::boson) - 0.1767767) < 1e-7);
  CHECK(std::abs(ideal_loop_coeff(3, Statistics::boson) - 0.0641500) < 1e-7);
  const auto t = loop_term(4, Statistics::fermion);
  CHECK(t.l == 4);
  CHECK(t.value == -std::pow(4.0, -2.5));
  CHECK_THROWS_AS(ideal_loop_coeff(0, Statistics::boson), DomainError);
}

TEST_CASE("pressure series partial sums") {
  const double z = 0.1;
  double direct = 0.0;
  for (int l = 1; l <= 3; ++l) direct += std::pow(z, l) * std::pow(l, -2.5);
  const auto s = ideal_pressure_series(z, 3, Statistics::boson);
  CHECK(std::abs(s.value - direct) < 1e-15);
  CHECK_FALSE(s.divergent);

  double fifty = 0.0;
  for (int l = 1; l <= 50; ++l) fifty += std::pow(z, l) * std::pow(l, -2.5);
  const auto long_sum = ideal_pressure_series(z, 50, Statistics::boson);
  CHECK(std::abs(long_sum.value - fifty) < 1e-15);
  CHECK(std::abs(long_sum.value - 0.1018352) < 1e-7);

  const auto f = ideal_pressure_series(z, 3, Statistics::fermion);
  CHECK(std::abs(f.value - (z - z * z * std::pow(2.0, -2.5) + z * z * z * std::pow(3.0, -2.5))) < 1e-15);

  CHECK(ideal_pressure_series(0.0, 5, Statistics::boson).value == 0.0);
  CHECK(ideal_pressure_series(1.0, 5, Statistics::boson).divergent);
  CHECK_FALSE(ideal_pressure_series(1.0, 5, Statistics::fermion).divergent);
  CHECK(ideal_pressure_series(1.5, 5, Statistics::fermion).divergent);
  CHECK_THROWS_AS(ideal_pressure_series(-0.1, 3, Statistics::boson), DomainError);
  CHECK_THROWS_AS(ideal_pressure_series(0.1, 0, Statistics::boson), DomainError);
}

TEST_CASE("boson series approaches zeta(5/2) at z = 1") {
  const auto s = ideal_pressure_series(1.0, 200000, Statistics::boson);
  CHECK(std::abs(s.value - 1.3414872573) < 1e-6);
}

TEST_CASE("tridiagonal determinant") {
  for (int n = 1; n <= 20; ++n) {
    CHECK(tridiag_det(n) == n + 1);
    CHECK(tridiag_det_elimination(n) == n + 1);
  }
  for (int n = 1; n <= 8; ++n) {
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) {
      a[i][i] = 2;
      if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = -1;
    }
    CHECK(cofactor_det(a) == tridiag_det(n));
  }
}

TEST_CASE("ring quadrature equals l^(-5/2) independent of wavelength") {
  for (int l : {2, 3, 4}) {
    const double exact = std::pow(static_cast<double>(l), -2.5);
    for (double lam : {0.1, 1.0, 1.51, 10.0}) CHECK(std::abs(ideal_loop_quadrature(l, lam) / exact - 1.0) < 1e-8);
  }
  CHECK_THROWS_AS(ideal_loop_quadrature(1, 1.0), DomainError);
  CHECK_THROWS_AS(ideal_loop_quadrature(5, 1.0), DomainError);
}
