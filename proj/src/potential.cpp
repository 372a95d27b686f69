#include "qcorr/potential.hpp"

#include <cmath>

#include "qcorr/errors.hpp"
#include "qcorr/units.hpp"

namespace qcorr {

namespace {
void check_radius(double r) {
  if (!(r > 0.0)) throw DomainError("pair separation must be positive");
}
}  // namespace

LennardJones::LennardJones(double eps, double sigma, double r_cut)
    : eps_(eps), sigma_(sigma), r_cut_(r_cut) {
  if (!(eps > 0.0) || !(sigma > 0.0)) throw DomainError("LJ eps and sigma must be positive");
  if (!(r_cut > sigma)) throw DomainError("LJ cutoff must exceed sigma");
}

double LennardJones::u(double r) const {
  check_radius(r);
  return u_r2(r * r);
}

double LennardJones::du(double r) const {
  check_radius(r);
  const double s6 = std::pow(sigma_ / r, 6);
  return 4.0 * eps_ * (-12.0 * s6 * s6 + 6.0 * s6) / r;
}

double LennardJones::d2u(double r) const {
  check_radius(r);
  const double s6 = std::pow(sigma_ / r, 6);
  return 4.0 * eps_ * (156.0 * s6 * s6 - 42.0 * s6) / (r * r);
}

double LennardJones::u_r2(double r2) const {
  const double x = sigma_ * sigma_ / r2;
  const double s6 = x * x * x;
  return 4.0 * eps_ * (s6 * s6 - s6);
}

double LennardJones::r_du_r2(double r2) const {
  const double x = sigma_ * sigma_ / r2;
  const double s6 = x * x * x;
  return 4.0 * eps_ * (-12.0 * s6 * s6 + 6.0 * s6);
}

double LennardJones::energy_tail_per_particle(double rho) const {
  if (!truncated()) return 0.0;
  const double sr3 = std::pow(sigma_ / r_cut_, 3);
  const double sr9 = sr3 * sr3 * sr3;
  const double s3 = sigma_ * sigma_ * sigma_;
  return (8.0 / 3.0) * constants::pi * rho * eps_ * s3 * (sr9 / 3.0 - sr3);
}

double LennardJones::pressure_tail(double rho) const {
  if (!truncated()) return 0.0;
  const double sr3 = std::pow(sigma_ / r_cut_, 3);
  const double sr9 = sr3 * sr3 * sr3;
  const double s3 = sigma_ * sigma_ * sigma_;
  return (16.0 / 3.0) * constants::pi * rho * rho * eps_ * s3 * (2.0 * sr9 / 3.0 - sr3);
}

double laplacian_tail(double rho, double r_cut, double prefactor) {
  if (!(r_cut >= 2.5)) throw DomainError("laplacian tail needs r_cut >= 2.5 sigma");
  return -prefactor * 4.0 * constants::pi * rho * rho * (-4.0) * 6.0 / std::pow(r_cut, 5);
}

}  // namespace qcorr
