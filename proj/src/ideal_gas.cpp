#include "qcorr/ideal_gas.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/quadrature.hpp"

namespace qcorr {

double ideal_loop_coeff(int l, Statistics statistics) {
  if (l < 1) throw DomainError("loop order must be at least 1");
  const double sign = (l % 2 == 0) ? exchange_sign(statistics) : 1.0;
  return sign * std::pow(static_cast<double>(l), -2.5);
}

LoopTerm loop_term(int l, Statistics statistics) { return {l, statistics, ideal_loop_coeff(l, statistics)}; }

SeriesSum ideal_pressure_series(double z, int l_max, Statistics statistics) {
  if (!(z >= 0.0)) throw DomainError("fugacity must be non-negative");
  if (l_max < 1) throw DomainError("series needs at least one term");
  SeriesSum out;
  out.divergent = statistics == Statistics::boson ? z >= 1.0 : z > 1.0;
  double zl = 1.0;
  for (int l = 1; l <= l_max; ++l) {
    zl *= z;
    out.value += ideal_loop_coeff(l, statistics) * zl;
  }
  return out;
}

std::int64_t tridiag_det(int n) {
  if (n < 1) throw DomainError("matrix dimension must be at least 1");
  std::int64_t prev = 1, cur = 2;
  for (int k = 2; k <= n; ++k) {
    const std::int64_t next = 2 * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::int64_t tridiag_det_elimination(int n) {
  if (n < 1) throw DomainError("matrix dimension must be at least 1");
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::int64_t> m(un * un, 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return m[i * un + j]; };
  for (std::size_t i = 0; i < un; ++i) {
    at(i, i) = 2;
    if (i + 1 < un) at(i, i + 1) = at(i + 1, i) = -1;
  }
  // Bareiss: every division is exact and the last pivot is the determinant.
  std::int64_t prev_pivot = 1;
  for (std::size_t k = 0; k + 1 < un; ++k) {
    if (at(k, k) == 0) throw DomainError("zero pivot in elimination");
    for (std::size_t i = k + 1; i < un; ++i)
      for (std::size_t j = k + 1; j < un; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev_pivot;
    prev_pivot = at(k, k);
  }
  return at(un - 1, un - 1);
}

double ideal_loop_quadrature(int l, double lambda, int nodes_per_dim) {
  if (l < 2 || l > 4) throw DomainError("ideal loop quadrature supports l = 2, 3, 4, got " + std::to_string(l));
  if (!(lambda > 0.0)) throw DomainError("thermal wavelength must be positive");
  if (nodes_per_dim < 8) throw DomainError("too few quadrature nodes");

  // Ring x_0 = 0, x_1..x_{l-1}, back to x_0, along one direction. The weight
  // exp(-pi sum (x_i - x_{i+1})^2 / Lambda^2) is below 1e-20 beyond 5 Lambda.
  const auto rule = gauss_legendre(static_cast<std::size_t>(nodes_per_dim), -5.0 * lambda, 5.0 * lambda);
  const std::size_t m = rule.size();
  const int dims = l - 1;
  const double scale = constants::pi / (lambda * lambda);

  std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
  double per_direction = 0.0;
  for (;;) {
    double weight = 1.0, ring = 0.0, prev = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double x = rule.nodes[idx[d]];
      weight *= rule.weights[idx[d]];
      ring += (x - prev) * (x - prev);
      prev = x;
    }
    ring += prev * prev;
    per_direction += weight * std::exp(-scale * ring);

    int d = 0;
    while (d < dims && ++idx[d] == m) idx[d++] = 0;
    if (d == dims) break;
  }

  // -beta Omega_l / V = (1/l) Lambda^(-3l) z^l (per_direction)^3.
  const double reduced = per_direction / std::pow(lambda, dims);
  return reduced * reduced * reduced / l;
}

}  // namespace qcorr
