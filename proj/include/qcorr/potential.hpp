#pragma once

#include <limits>

namespace qcorr {

// Lennard-Jones pair potential 4 eps [(sigma/r)^12 - (sigma/r)^6].
// r_cut only matters to the Monte Carlo engine; the integral-equation path
// evaluates the untruncated potential.
class LennardJones {
 public:
  LennardJones() = default;
  LennardJones(double eps, double sigma, double r_cut = std::numeric_limits<double>::infinity());

  double eps() const { return eps_; }
  double sigma() const { return sigma_; }
  double r_cut() const { return r_cut_; }
  bool truncated() const { return r_cut_ < std::numeric_limits<double>::infinity(); }

  // All three throw DomainError for r <= 0.
  double u(double r) const;
  double du(double r) const;
  double d2u(double r) const;

  // Same as above without argument checks, for r^2 already known positive.
  double u_r2(double r2) const;
  // r u'(r), evaluated from r^2.
  double r_du_r2(double r2) const;

  // Standard long-range corrections for a truncated fluid (no shift).
  // Energy per particle and pressure, reduced by eps and sigma.
  double energy_tail_per_particle(double rho) const;
  double pressure_tail(double rho) const;

 private:
  double eps_ = 1.0;
  double sigma_ = 1.0;
  double r_cut_ = std::numeric_limits<double>::infinity();
};

// Tail of -beta Omega_{1,2} sigma^3 / V from the attractive branch beyond r_cut:
//   -prefactor * 4 pi rho^2 * (-4 eps) * 6 sigma^6 / r_cut^5,
// with prefactor = hbar^2 beta^2 / (24 m sigma^2) in reduced units (eps = sigma = 1).
double laplacian_tail(double rho, double r_cut, double prefactor);

}  // namespace qcorr
