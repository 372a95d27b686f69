#pragma once

#include <cstdint>

#include "qcorr/units.hpp"

namespace qcorr {

// Coefficient of z^l in beta p Lambda^3 for the ideal quantum gas.
struct LoopTerm {
  int l = 1;
  Statistics statistics = Statistics::boson;
  double value = 1.0;
};

// (+-1)^(l-1) l^(-5/2). Throws DomainError for l < 1.
double ideal_loop_coeff(int l, Statistics statistics);
LoopTerm loop_term(int l, Statistics statistics);

struct SeriesSum {
  double value = 0.0;
  // Set when the full series does not converge at this z (boson z >= 1,
  // fermion z > 1); value is still the partial sum.
  bool divergent = false;
};

// Partial sum of beta p Lambda^3 = sum_{l=1}^{l_max} (+-1)^(l-1) z^l l^(-5/2).
SeriesSum ideal_pressure_series(double z, int l_max, Statistics statistics);

// Determinant of the n x n tridiagonal matrix with 2 on the diagonal and -1
// beside it, from D(n) = 2 D(n-1) - D(n-2). Equals n + 1.
std::int64_t tridiag_det(int n);

// Same determinant by fraction-free (Bareiss) elimination of the explicit
// matrix; independent of the recurrence.
std::int64_t tridiag_det_elimination(int n);

// -beta Omega_l Lambda^3 / (V z^l) for the ideal gas by brute-force quadrature
// of the ring integral over l - 1 relative positions, one Cartesian direction
// at a time, cubed. l in {2, 3, 4}; anything else throws DomainError.
double ideal_loop_quadrature(int l, double lambda, int nodes_per_dim = 96);

}  // namespace qcorr
